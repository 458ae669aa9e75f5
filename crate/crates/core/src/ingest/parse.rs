use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::{Side, Transaction};
use crate::error::{Error, Result};
use crate::time::Timestamp;

/// Header names for the seven transaction fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColumnMapping {
    pub txn_id: String,
    pub timestamp: String,
    pub buyer_id: String,
    pub seller_id: String,
    pub price: String,
    pub size: String,
    /// The side column may be absent from the file.
    pub side: Option<String>,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            txn_id: "txn_id".into(),
            timestamp: "timestamp".into(),
            buyer_id: "buyer_id".into(),
            seller_id: "seller_id".into(),
            price: "price".into(),
            size: "size".into(),
            side: Some("side".into()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParseOptions {
    pub columns: ColumnMapping,
    /// `None` sniffs comma or tab from the header line.
    pub delimiter: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    MissingField(&'static str),
    MalformedTimestamp,
    MalformedPrice,
    MalformedSize,
    MalformedSide,
    NonPositivePrice,
    NonPositiveSize,
    DuplicateTxnId,
    InvalidUtf8,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::MissingField(name) => write!(f, "missing column {name}"),
            RejectReason::MalformedTimestamp => f.write_str("malformed timestamp"),
            RejectReason::MalformedPrice => f.write_str("malformed price"),
            RejectReason::MalformedSize => f.write_str("malformed size"),
            RejectReason::MalformedSide => f.write_str("malformed side"),
            RejectReason::NonPositivePrice => f.write_str("non-positive price"),
            RejectReason::NonPositiveSize => f.write_str("non-positive size"),
            RejectReason::DuplicateTxnId => f.write_str("duplicate txn_id"),
            RejectReason::InvalidUtf8 => f.write_str("invalid utf-8"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// 1-based line number in the source, header included.
    pub line_no: u64,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Default)]
pub struct ParseReport {
    /// Accepted rows in file order.
    pub transactions: Vec<Transaction>,
    pub rejections: Vec<Rejection>,
}

impl ParseReport {
    pub fn rows(&self) -> usize {
        self.transactions.len() + self.rejections.len()
    }
}

struct Columns {
    txn_id: usize,
    timestamp: usize,
    buyer_id: usize,
    seller_id: usize,
    price: usize,
    size: usize,
    side: Option<usize>,
}

impl Columns {
    fn resolve(header: &csv::ByteRecord, mapping: &ColumnMapping) -> Result<Self> {
        let find = |name: &str| {
            header
                .iter()
                .position(|h| std::str::from_utf8(h).is_ok_and(|h| h.trim() == name))
        };
        let require = |name: &str| find(name).ok_or_else(|| Error::MissingHeaderColumn(name.into()));
        Ok(Columns {
            txn_id: require(&mapping.txn_id)?,
            timestamp: require(&mapping.timestamp)?,
            buyer_id: require(&mapping.buyer_id)?,
            seller_id: require(&mapping.seller_id)?,
            price: require(&mapping.price)?,
            size: require(&mapping.size)?,
            side: mapping.side.as_deref().and_then(find),
        })
    }
}

fn sniff_delimiter(header: &[u8]) -> u8 {
    let line = header.split(|&b| b == b'\n').next().unwrap_or(header);
    if !line.contains(&b',') && line.contains(&b'\t') {
        b'\t'
    } else {
        b','
    }
}

fn field<'r>(
    record: &'r csv::ByteRecord,
    idx: usize,
    name: &'static str,
) -> std::result::Result<&'r str, RejectReason> {
    let raw = record.get(idx).ok_or(RejectReason::MissingField(name))?;
    let s = std::str::from_utf8(raw).map_err(|_| RejectReason::InvalidUtf8)?.trim();
    if s.is_empty() {
        Err(RejectReason::MissingField(name))
    } else {
        Ok(s)
    }
}

fn parse_row(record: &csv::ByteRecord, cols: &Columns) -> std::result::Result<Transaction, RejectReason> {
    let txn_id = field(record, cols.txn_id, "txn_id")?;
    let timestamp = Timestamp::parse(field(record, cols.timestamp, "timestamp")?)
        .ok_or(RejectReason::MalformedTimestamp)?;
    let buyer_id = field(record, cols.buyer_id, "buyer_id")?;
    let seller_id = field(record, cols.seller_id, "seller_id")?;

    let price: f64 = field(record, cols.price, "price")?
        .parse()
        .map_err(|_| RejectReason::MalformedPrice)?;
    if !price.is_finite() {
        return Err(RejectReason::MalformedPrice);
    }
    if price <= 0.0 {
        return Err(RejectReason::NonPositivePrice);
    }

    let size: i64 = field(record, cols.size, "size")?
        .parse()
        .map_err(|_| RejectReason::MalformedSize)?;
    if size <= 0 {
        return Err(RejectReason::NonPositiveSize);
    }

    let side = match cols.side.and_then(|i| record.get(i)) {
        None => None,
        Some(raw) => {
            let s = std::str::from_utf8(raw).map_err(|_| RejectReason::InvalidUtf8)?;
            if s.trim().is_empty() {
                None
            } else {
                Some(Side::parse(s).ok_or(RejectReason::MalformedSide)?)
            }
        }
    };

    Ok(Transaction {
        txn_id: txn_id.to_owned(),
        buyer_id: buyer_id.to_owned(),
        seller_id: seller_id.to_owned(),
        timestamp,
        price,
        size: size as u64,
        side,
    })
}

/// Reads a header-bearing delimited transaction file.
///
/// Every data row either becomes a [`Transaction`] or a [`Rejection`]; only an
/// unreadable source or a header lacking a required column is fatal. Rows whose
/// txn id repeats an earlier accepted row are rejected as duplicates.
pub fn parse_transactions<R: Read>(source: R, options: &ParseOptions) -> Result<ParseReport> {
    let mut source = BufReader::with_capacity(1 << 16, source);
    let delimiter = match options.delimiter {
        Some(d) => d,
        None => sniff_delimiter(source.fill_buf()?),
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .has_headers(true)
        .from_reader(source);

    let cols = Columns::resolve(reader.byte_headers()?, &options.columns)?;

    let mut report = ParseReport::default();
    let mut seen: HashSet<String> = HashSet::new();
    let mut record = csv::ByteRecord::new();
    while reader.read_byte_record(&mut record)? {
        let line_no = record.position().map_or(0, |p| p.line());
        match parse_row(&record, &cols) {
            Ok(txn) => {
                if seen.contains(txn.txn_id.as_str()) {
                    report.rejections.push(Rejection { line_no, reason: RejectReason::DuplicateTxnId });
                } else {
                    seen.insert(txn.txn_id.clone());
                    report.transactions.push(txn);
                }
            }
            Err(reason) => report.rejections.push(Rejection { line_no, reason }),
        }
    }
    Ok(report)
}

/// Writes transactions in the format [`parse_transactions`] reads with the
/// default column mapping. Prices use the shortest decimal that round-trips.
pub fn write_transactions<W: Write>(sink: W, transactions: &[Transaction]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(["txn_id", "timestamp", "buyer_id", "seller_id", "price", "size", "side"])?;
    let mut ts = String::new();
    let mut price = String::new();
    let mut size = String::new();
    for t in transactions {
        use std::fmt::Write as _;
        ts.clear();
        price.clear();
        size.clear();
        write!(ts, "{}", t.timestamp).expect("write to string");
        write!(price, "{}", t.price).expect("write to string");
        write!(size, "{}", t.size).expect("write to string");
        writer.write_record([
            t.txn_id.as_str(),
            ts.as_str(),
            t.buyer_id.as_str(),
            t.seller_id.as_str(),
            price.as_str(),
            size.as_str(),
            t.side.map_or("", Side::as_str),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_rejections<W: Write>(sink: W, rejections: &[Rejection]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(["line_no", "reason"])?;
    for r in rejections {
        writer.write_record([r.line_no.to_string(), r.reason.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ParseReport {
        parse_transactions(text.as_bytes(), &ParseOptions::default()).unwrap()
    }

    const HEADER: &str = "txn_id,timestamp,buyer_id,seller_id,price,size,side\n";

    #[test]
    fn maps_fields_directly() {
        let report = parse(&format!("{HEADER}T1,2005-08-22T09:31:02,A,B,4.60,1000,B\n"));
        assert!(report.rejections.is_empty());
        let t = &report.transactions[0];
        assert_eq!(t.txn_id, "T1");
        assert_eq!(t.buyer_id, "A");
        assert_eq!(t.seller_id, "B");
        assert_eq!(t.price, 4.60);
        assert_eq!(t.size, 1000);
        assert_eq!(t.side, Some(Side::Buy));
        assert_eq!(t.timestamp, Timestamp::parse("2005-08-22T09:31:02").unwrap());
    }

    #[test]
    fn zero_size_is_rejected() {
        let report = parse(&format!("{HEADER}T1,2005-08-22T09:31:02,A,B,4.60,0,B\n"));
        assert!(report.transactions.is_empty());
        assert_eq!(report.rejections, vec![Rejection { line_no: 2, reason: RejectReason::NonPositiveSize }]);
        assert_eq!(report.rejections[0].reason.to_string(), "non-positive size");
    }

    #[test]
    fn collects_each_kind_of_rejection() {
        let body = "\
T1,2005-08-22T09:31:02,A,B,4.60,100,B
T2,not-a-time,A,B,4.60,100,B
T3,2005-08-22T09:31:02,A,B,-1,100,B
T4,2005-08-22T09:31:02,A,B,abc,100,
T5,2005-08-22T09:31:02,A,B,4.6,-3,S
T6,2005-08-22T09:31:02,A
T1,2005-08-22T09:31:03,A,B,4.60,100,B
T7,2005-08-22T09:31:02,,B,4.60,100,B
T8,1124703062000,A,B,4.60,100,X
T9,1124703062000,A,B,4.60,1.5,
";
        let report = parse(&format!("{HEADER}{body}"));
        let reasons: Vec<_> = report.rejections.iter().map(|r| (r.line_no, r.reason.clone())).collect();
        assert_eq!(
            reasons,
            vec![
                (3, RejectReason::MalformedTimestamp),
                (4, RejectReason::NonPositivePrice),
                (5, RejectReason::MalformedPrice),
                (6, RejectReason::NonPositiveSize),
                (7, RejectReason::MissingField("seller_id")),
                (8, RejectReason::DuplicateTxnId),
                (9, RejectReason::MissingField("buyer_id")),
                (10, RejectReason::MalformedSide),
                (11, RejectReason::MalformedSize),
            ]
        );
        assert_eq!(report.transactions.len(), 1);
        assert_eq!(report.rows(), 10);
    }

    #[test]
    fn tab_delimited_and_reordered_columns() {
        let text = "price\tsize\ttxn_id\tseller_id\tbuyer_id\ttimestamp\n4.5\t200\tX\tS\tB\t1124703062000\n";
        let report = parse(text);
        assert_eq!(report.transactions.len(), 1);
        let t = &report.transactions[0];
        assert_eq!((t.seller_id.as_str(), t.buyer_id.as_str(), t.size), ("S", "B", 200));
        assert_eq!(t.side, None);
    }

    #[test]
    fn custom_column_names() {
        let options = ParseOptions {
            columns: ColumnMapping {
                txn_id: "id".into(),
                timestamp: "time".into(),
                buyer_id: "bid_acct".into(),
                seller_id: "ask_acct".into(),
                price: "px".into(),
                size: "qty".into(),
                side: None,
            },
            delimiter: None,
        };
        let text = "id,time,bid_acct,ask_acct,px,qty\n1,2005-08-22T09:31:02,a,b,4,10\n";
        let report = parse_transactions(text.as_bytes(), &options).unwrap();
        assert_eq!(report.transactions.len(), 1);
    }

    #[test]
    fn missing_header_column_is_fatal() {
        let err = parse_transactions("txn_id,timestamp,buyer_id\n".as_bytes(), &ParseOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::MissingHeaderColumn(c) if c == "seller_id"));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let report = parse(&format!(
            "{HEADER}T1,2005-08-22T09:31:02.125,A,B,4.6,1000,B\nT2,2005-08-22T09:31:05,C,A,4.61,300,\n"
        ));
        let mut buf = Vec::new();
        write_transactions(&mut buf, &report.transactions).unwrap();
        let again = parse_transactions(buf.as_slice(), &ParseOptions::default()).unwrap();
        assert_eq!(again.transactions, report.transactions);
    }

    #[test]
    fn rejection_report_format() {
        let mut buf = Vec::new();
        write_rejections(&mut buf, &[Rejection { line_no: 7, reason: RejectReason::NonPositiveSize }]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "line_no,reason\n7,non-positive size\n");
    }
}
