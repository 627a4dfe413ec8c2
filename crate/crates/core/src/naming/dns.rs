//! A minimal stub resolver for TXT queries against one nameserver.
//!
//! Sends a recursive query over UDP (EDNS0, 4096-byte buffer) and retries
//! over TCP when the answer is truncated. Intended for the optional live
//! check; the rest of the crate runs against [`super::Zone`].

use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream, ToSocketAddrs, UdpSocket};
use std::time::Duration;

use rand::Rng;

use super::{DnsName, NamingError, Resolver};

const TYPE_TXT: u16 = 16;
const TYPE_OPT: u16 = 41;
const CLASS_IN: u16 = 1;
const EDNS_UDP_SIZE: u16 = 4096;

pub const NAMESERVER_ENV: &str = "DIDSELF_NAMESERVER";
pub const TIMEOUT_ENV: &str = "DIDSELF_DNS_TIMEOUT_MS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnsClientConfig {
    pub nameserver: SocketAddr,
    pub timeout: Duration,
}

impl DnsClientConfig {
    pub fn new(nameserver: SocketAddr) -> Self {
        DnsClientConfig {
            nameserver,
            timeout: Duration::from_millis(2000),
        }
    }

    /// Parses `host:port`, `[v6]:port` or a bare address (port 53).
    pub fn parse_nameserver(s: &str) -> Result<SocketAddr, NamingError> {
        if let Ok(addr) = s.parse::<SocketAddr>() {
            return Ok(addr);
        }
        if let Ok(ip) = s.parse::<std::net::IpAddr>() {
            return Ok(SocketAddr::new(ip, 53));
        }
        let candidate = if s.contains(':') { s.to_owned() } else { format!("{s}:53") };
        candidate
            .to_socket_addrs()
            .map_err(|e| NamingError::Transport(format!("nameserver {s:?}: {e}")))?
            .next()
            .ok_or_else(|| NamingError::Transport(format!("nameserver {s:?} did not resolve")))
    }

    /// Reads `DIDSELF_NAMESERVER` and optionally `DIDSELF_DNS_TIMEOUT_MS`.
    pub fn from_env() -> Result<Option<Self>, NamingError> {
        let Ok(ns) = std::env::var(NAMESERVER_ENV) else {
            return Ok(None);
        };
        let mut config = DnsClientConfig::new(Self::parse_nameserver(&ns)?);
        if let Ok(ms) = std::env::var(TIMEOUT_ENV) {
            let ms: u64 = ms
                .parse()
                .map_err(|_| NamingError::Transport(format!("{TIMEOUT_ENV}={ms:?} is not a number")))?;
            config.timeout = Duration::from_millis(ms);
        }
        Ok(Some(config))
    }
}

#[derive(Debug, Clone)]
pub struct DnsTxtClient {
    config: DnsClientConfig,
}

impl DnsTxtClient {
    pub fn new(config: DnsClientConfig) -> Self {
        DnsTxtClient { config }
    }

    pub fn config(&self) -> &DnsClientConfig {
        &self.config
    }

    fn exchange_udp(&self, query: &[u8]) -> std::io::Result<Vec<u8>> {
        let bind: SocketAddr = if self.config.nameserver.is_ipv4() {
            "0.0.0.0:0".parse().expect("literal")
        } else {
            "[::]:0".parse().expect("literal")
        };
        let sock = UdpSocket::bind(bind)?;
        sock.set_read_timeout(Some(self.config.timeout))?;
        sock.connect(self.config.nameserver)?;
        sock.send(query)?;
        let mut buf = vec![0u8; usize::from(EDNS_UDP_SIZE)];
        loop {
            let n = sock.recv(&mut buf)?;
            // Ignore datagrams that are not a reply to this query.
            if n >= 2 && buf[..2] == query[..2] {
                buf.truncate(n);
                return Ok(buf);
            }
        }
    }

    fn exchange_tcp(&self, query: &[u8]) -> std::io::Result<Vec<u8>> {
        let mut stream = TcpStream::connect_timeout(&self.config.nameserver, self.config.timeout)?;
        stream.set_read_timeout(Some(self.config.timeout))?;
        stream.set_write_timeout(Some(self.config.timeout))?;
        let mut framed = (query.len() as u16).to_be_bytes().to_vec();
        framed.extend_from_slice(query);
        stream.write_all(&framed)?;
        let mut len = [0u8; 2];
        stream.read_exact(&mut len)?;
        let mut buf = vec![0u8; usize::from(u16::from_be_bytes(len))];
        stream.read_exact(&mut buf)?;
        Ok(buf)
    }
}

impl Resolver for DnsTxtClient {
    fn lookup_txt(&self, name: &DnsName) -> Result<Vec<String>, NamingError> {
        let id: u16 = rand::thread_rng().gen();
        let query = encode_query(id, name);
        let transport = |e: std::io::Error| NamingError::Transport(format!("{}: {e}", self.config.nameserver));
        let mut reply = decode_response(id, &self.exchange_udp(&query).map_err(transport)?)?;
        if reply.truncated {
            reply = decode_response(id, &self.exchange_tcp(&query).map_err(transport)?)?;
        }
        Ok(reply.txt)
    }
}

pub(crate) fn encode_query(id: u16, name: &DnsName) -> Vec<u8> {
    let mut q = Vec::with_capacity(64);
    q.extend_from_slice(&id.to_be_bytes());
    q.extend_from_slice(&0x0100u16.to_be_bytes()); // RD
    q.extend_from_slice(&1u16.to_be_bytes()); // QDCOUNT
    q.extend_from_slice(&0u16.to_be_bytes());
    q.extend_from_slice(&0u16.to_be_bytes());
    q.extend_from_slice(&1u16.to_be_bytes()); // ARCOUNT: OPT
    for label in name.labels() {
        q.push(label.len() as u8);
        q.extend_from_slice(label.as_bytes());
    }
    q.push(0);
    q.extend_from_slice(&TYPE_TXT.to_be_bytes());
    q.extend_from_slice(&CLASS_IN.to_be_bytes());
    // OPT pseudo-record: root name, type, UDP size, extended rcode/flags, rdlen.
    q.push(0);
    q.extend_from_slice(&TYPE_OPT.to_be_bytes());
    q.extend_from_slice(&EDNS_UDP_SIZE.to_be_bytes());
    q.extend_from_slice(&0u32.to_be_bytes());
    q.extend_from_slice(&0u16.to_be_bytes());
    q
}

#[derive(Debug, Default)]
pub(crate) struct Reply {
    pub truncated: bool,
    pub txt: Vec<String>,
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], NamingError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(short)?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, NamingError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, NamingError> {
        let b = self.take(2)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn skip_name(&mut self) -> Result<(), NamingError> {
        loop {
            let len = self.u8()?;
            match len {
                0 => return Ok(()),
                l if l & 0xC0 == 0xC0 => {
                    self.u8()?;
                    return Ok(());
                }
                l if l & 0xC0 == 0 => {
                    self.take(usize::from(l))?;
                }
                _ => return Err(NamingError::Transport("bad label in reply".into())),
            }
        }
    }
}

fn short() -> NamingError {
    NamingError::Transport("truncated DNS message".into())
}

pub(crate) fn decode_response(id: u16, msg: &[u8]) -> Result<Reply, NamingError> {
    let mut r = Reader { buf: msg, pos: 0 };
    if r.u16()? != id {
        return Err(NamingError::Transport("reply id mismatch".into()));
    }
    let flags = r.u16()?;
    if flags & 0x8000 == 0 {
        return Err(NamingError::Transport("message is not a reply".into()));
    }
    let truncated = flags & 0x0200 != 0;
    match flags & 0x000F {
        0 => {}
        3 => return Ok(Reply { truncated, txt: vec![] }),
        rcode => return Err(NamingError::Transport(format!("server returned rcode {rcode}"))),
    }
    let qd = r.u16()?;
    let an = r.u16()?;
    r.u16()?;
    r.u16()?;
    for _ in 0..qd {
        r.skip_name()?;
        r.take(4)?;
    }
    let mut txt = Vec::new();
    for _ in 0..an {
        r.skip_name()?;
        let rtype = r.u16()?;
        let _class = r.u16()?;
        r.take(4)?;
        let rdlen = usize::from(r.u16()?);
        let rdata = r.take(rdlen)?;
        if rtype != TYPE_TXT {
            continue;
        }
        let mut joined = Vec::with_capacity(rdlen);
        let mut d = Reader { buf: rdata, pos: 0 };
        while d.pos < rdata.len() {
            let n = usize::from(d.u8()?);
            joined.extend_from_slice(d.take(n)?);
        }
        if let Ok(s) = String::from_utf8(joined) {
            txt.push(s);
        }
    }
    Ok(Reply { truncated, txt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::thread;

    /// Builds a reply to `query` with the given TXT strings, each split into
    /// 255-byte character-strings, using a compression pointer to the question.
    fn encode_reply(query: &[u8], txts: &[&str], rcode: u16, truncated: bool) -> Vec<u8> {
        let mut r = Vec::new();
        r.extend_from_slice(&query[..2]);
        let mut flags = 0x8180u16 | rcode;
        if truncated {
            flags |= 0x0200;
        }
        r.extend_from_slice(&flags.to_be_bytes());
        r.extend_from_slice(&1u16.to_be_bytes());
        r.extend_from_slice(&(txts.len() as u16).to_be_bytes());
        r.extend_from_slice(&0u16.to_be_bytes());
        r.extend_from_slice(&0u16.to_be_bytes());
        // Copy the question section (name + type + class), leaving out the OPT record.
        let mut end = 12;
        while query[end] != 0 {
            end += 1 + usize::from(query[end]);
        }
        r.extend_from_slice(&query[12..end + 5]);
        for t in txts {
            r.extend_from_slice(&[0xC0, 0x0C]);
            r.extend_from_slice(&TYPE_TXT.to_be_bytes());
            r.extend_from_slice(&CLASS_IN.to_be_bytes());
            r.extend_from_slice(&300u32.to_be_bytes());
            let mut rdata = Vec::new();
            for chunk in t.as_bytes().chunks(255) {
                rdata.push(chunk.len() as u8);
                rdata.extend_from_slice(chunk);
            }
            r.extend_from_slice(&(rdata.len() as u16).to_be_bytes());
            r.extend_from_slice(&rdata);
        }
        r
    }

    #[test]
    fn query_layout() {
        let name = DnsName::parse("_dnslink.ab.example.org").unwrap();
        let q = encode_query(0xBEEF, &name);
        assert_eq!(&q[..2], &[0xBE, 0xEF]);
        assert_eq!(&q[12..22], b"\x08_dnslink\x02");
        assert!(q.ends_with(&[0, 0, 41, 0x10, 0, 0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn decodes_long_and_multiple_txt() {
        let name = DnsName::parse("x.example").unwrap();
        let q = encode_query(7, &name);
        let long = "d".repeat(600);
        let reply = decode_response(7, &encode_reply(&q, &[&long, "second"], 0, false)).unwrap();
        assert_eq!(reply.txt, vec![long, "second".to_string()]);
        let nx = decode_response(7, &encode_reply(&q, &[], 3, false)).unwrap();
        assert!(nx.txt.is_empty());
        assert!(decode_response(7, &encode_reply(&q, &[], 2, false)).is_err());
        assert!(decode_response(8, &encode_reply(&q, &[], 0, false)).is_err());
        let reply = encode_reply(&q, &["abc"], 0, false);
        assert!(decode_response(7, &reply[..reply.len() - 2]).is_err());
    }

    #[test]
    fn nameserver_parsing() {
        assert_eq!(DnsClientConfig::parse_nameserver("127.0.0.1").unwrap().port(), 53);
        assert_eq!(DnsClientConfig::parse_nameserver("127.0.0.1:5353").unwrap().port(), 5353);
        assert_eq!(DnsClientConfig::parse_nameserver("::1").unwrap().port(), 53);
        assert_eq!(DnsClientConfig::parse_nameserver("[::1]:5300").unwrap().port(), 5300);
    }

    #[test]
    fn udp_exchange_with_tcp_fallback() {
        let udp = UdpSocket::bind("127.0.0.1:0").unwrap();
        let addr = udp.local_addr().unwrap();
        let tcp = std::net::TcpListener::bind(addr).unwrap();
        let record = "dnslink=/ipfs/bafkreihdwdcefgh4dqkjv67uzcmw7ojee6xedzdetojuzjevtenxquvyku";

        let udp_server = thread::spawn(move || {
            let mut buf = [0u8; 512];
            let (n, peer) = udp.recv_from(&mut buf).unwrap();
            udp.send_to(&encode_reply(&buf[..n], &[], 0, true), peer).unwrap();
        });
        let tcp_server = thread::spawn(move || {
            let (mut s, _) = tcp.accept().unwrap();
            let mut len = [0u8; 2];
            s.read_exact(&mut len).unwrap();
            let mut q = vec![0u8; usize::from(u16::from_be_bytes(len))];
            s.read_exact(&mut q).unwrap();
            let reply = encode_reply(&q, &[record], 0, false);
            s.write_all(&(reply.len() as u16).to_be_bytes()).unwrap();
            s.write_all(&reply).unwrap();
        });

        let client = DnsTxtClient::new(DnsClientConfig::new(addr));
        let txt = client.lookup_txt(&DnsName::parse("_dnslink.k.example").unwrap()).unwrap();
        assert_eq!(txt, vec![record.to_string()]);
        udp_server.join().unwrap();
        tcp_server.join().unwrap();
    }

    #[test]
    fn unreachable_server_times_out() {
        // Bound but silent socket.
        let silent = UdpSocket::bind("127.0.0.1:0").unwrap();
        let mut config = DnsClientConfig::new(silent.local_addr().unwrap());
        config.timeout = Duration::from_millis(100);
        let err = DnsTxtClient::new(config).lookup_txt(&DnsName::parse("a.example").unwrap()).unwrap_err();
        assert!(matches!(err, NamingError::Transport(_)));
    }
}
