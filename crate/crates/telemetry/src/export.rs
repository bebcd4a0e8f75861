use std::fmt;
use std::io::Read;
use std::str::FromStr;

use quick_xml::events::{BytesDecl, BytesText, Event};
use quick_xml::{Reader, Writer};
use serde_json::{json, Map, Value};

use crate::error::{validation, Result, TelemetryError};
use crate::model::{format_timestamp, parse_timestamp, Channel, FeedEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedFormat {
    Csv,
    Json,
    Xml,
}

impl FeedFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FeedFormat::Csv => "csv",
            FeedFormat::Json => "json",
            FeedFormat::Xml => "xml",
        }
    }

    pub fn content_type(self) -> &'static str {
        match self {
            FeedFormat::Csv => "text/csv; charset=utf-8",
            FeedFormat::Json => "application/json",
            FeedFormat::Xml => "application/xml",
        }
    }
}

impl fmt::Display for FeedFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for FeedFormat {
    type Err = TelemetryError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FeedFormat::Csv),
            "json" => Ok(FeedFormat::Json),
            "xml" => Ok(FeedFormat::Xml),
            other => Err(validation(format!("unknown feed format '{other}'"))),
        }
    }
}

/// 1-based field indices that appear as columns.
fn columns(channel: &Channel, field: Option<usize>) -> Vec<usize> {
    match field {
        Some(f) => vec![f],
        None => (1..=channel.field_labels.len()).collect(),
    }
}

pub fn export_feed(channel: &Channel, entries: &[FeedEntry], format: FeedFormat, field: Option<usize>) -> Result<String> {
    let cols = columns(channel, field);
    match format {
        FeedFormat::Csv => export_csv(entries, &cols),
        FeedFormat::Json => export_json(channel, entries, &cols),
        FeedFormat::Xml => export_xml(channel, entries, &cols),
    }
}

fn export_csv(entries: &[FeedEntry], cols: &[usize]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header = vec!["created_at".to_string(), "entry_id".to_string()];
    header.extend(cols.iter().map(|c| format!("field{c}")));
    w.write_record(&header)?;
    for e in entries {
        let mut row = vec![format_timestamp(&e.created_at), e.entry_id.to_string()];
        row.extend(cols.iter().map(|&c| e.field(c).map(|v| v.to_string()).unwrap_or_default()));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| TelemetryError::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| TelemetryError::Serialization(e.to_string()))
}

fn channel_json(channel: &Channel, cols: &[usize]) -> Value {
    let mut c = Map::new();
    c.insert("id".into(), json!(channel.channel_id));
    c.insert("name".into(), json!(channel.name));
    for &i in cols {
        c.insert(format!("field{i}"), json!(channel.field_labels[i - 1]));
    }
    c.insert("created_at".into(), json!(format_timestamp(&channel.created_at)));
    Value::Object(c)
}

fn export_json(channel: &Channel, entries: &[FeedEntry], cols: &[usize]) -> Result<String> {
    let feeds: Vec<Value> = entries
        .iter()
        .map(|e| {
            let mut m = Map::new();
            m.insert("created_at".into(), json!(format_timestamp(&e.created_at)));
            m.insert("entry_id".into(), json!(e.entry_id));
            for &c in cols {
                m.insert(format!("field{c}"), json!(e.field(c)));
            }
            Value::Object(m)
        })
        .collect();
    Ok(serde_json::to_string_pretty(&json!({ "channel": channel_json(channel, cols), "feeds": feeds }))?)
}

fn xml_err(e: impl fmt::Display) -> TelemetryError {
    TelemetryError::Serialization(e.to_string())
}

fn export_xml(channel: &Channel, entries: &[FeedEntry], cols: &[usize]) -> Result<String> {
    let mut w = Writer::new_with_indent(Vec::new(), b' ', 2);
    w.write_event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None))).map_err(xml_err)?;
    w.create_element("channel")
        .write_inner_content(|w| {
            text_element(w, "id", &channel.channel_id.to_string())?;
            text_element(w, "name", &channel.name)?;
            for &i in cols {
                text_element(w, &format!("field{i}"), &channel.field_labels[i - 1])?;
            }
            text_element(w, "created-at", &format_timestamp(&channel.created_at))?;
            w.create_element("feeds").write_inner_content(|w| {
                for e in entries {
                    w.create_element("feed").write_inner_content(|w| {
                        text_element(w, "created-at", &format_timestamp(&e.created_at))?;
                        text_element(w, "entry-id", &e.entry_id.to_string())?;
                        for &c in cols {
                            if let Some(v) = e.field(c) {
                                text_element(w, &format!("field{c}"), &v.to_string())?;
                            }
                        }
                        Ok(())
                    })?;
                }
                Ok(())
            })?;
            Ok(())
        })
        .map_err(xml_err)?;
    let mut out = String::from_utf8(w.into_inner()).map_err(xml_err)?;
    out.push('\n');
    Ok(out)
}

fn text_element<W: std::io::Write>(w: &mut Writer<W>, name: &str, text: &str) -> std::io::Result<()> {
    w.create_element(name).write_text_content(BytesText::new(text))?;
    Ok(())
}

fn field_index(name: &str) -> Option<usize> {
    name.strip_prefix("field").and_then(|n| n.parse().ok()).filter(|&n: &usize| n >= 1)
}

fn entry_with(entry_id: u64, created_at: &str, values: Vec<(usize, f64)>) -> Result<FeedEntry> {
    let width = values.iter().map(|(i, _)| *i).max().unwrap_or(0);
    let mut fields = vec![None; width];
    for (i, v) in values {
        fields[i - 1] = Some(v);
    }
    Ok(FeedEntry { entry_id, created_at: parse_timestamp(created_at)?, fields })
}

fn parse_number(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| validation(format!("{what}: '{s}' is not a number")))
}

/// Parses a feed exported as CSV. Columns named `fieldN` land in slot N.
pub fn parse_feed_csv<R: Read>(reader: R) -> Result<Vec<FeedEntry>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.get(0) != Some("created_at") || headers.get(1) != Some("entry_id") {
        return Err(validation("feed CSV must start with created_at,entry_id"));
    }
    let cols: Vec<usize> = headers
        .iter()
        .skip(2)
        .map(|h| field_index(h).ok_or_else(|| validation(format!("unexpected feed column '{h}'"))))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let id = rec[1].parse().map_err(|_| validation(format!("bad entry_id '{}'", &rec[1])))?;
        let mut values = Vec::new();
        for (cell, &c) in rec.iter().skip(2).zip(&cols) {
            if !cell.is_empty() {
                values.push((c, parse_number(cell, &format!("field{c}"))?));
            }
        }
        out.push(entry_with(id, &rec[0], values)?);
    }
    Ok(out)
}

pub fn parse_feed_json(text: &str) -> Result<Vec<FeedEntry>> {
    let doc: Value = serde_json::from_str(text)?;
    let feeds = doc
        .get("feeds")
        .and_then(Value::as_array)
        .ok_or_else(|| validation("feed JSON lacks a feeds array"))?;
    feeds
        .iter()
        .map(|f| {
            let obj = f.as_object().ok_or_else(|| validation("feed item is not an object"))?;
            let created = obj.get("created_at").and_then(Value::as_str).ok_or_else(|| validation("missing created_at"))?;
            let id = obj.get("entry_id").and_then(Value::as_u64).ok_or_else(|| validation("missing entry_id"))?;
            let values = obj
                .iter()
                .filter_map(|(k, v)| Some((field_index(k)?, v.as_f64()?)))
                .collect();
            entry_with(id, created, values)
        })
        .collect()
}

pub fn parse_feed_xml(text: &str) -> Result<Vec<FeedEntry>> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut out = Vec::new();
    let mut path: Vec<String> = Vec::new();
    let mut current: Option<(Option<u64>, Option<String>, Vec<(usize, f64)>)> = None;
    loop {
        match reader.read_event().map_err(xml_err)? {
            Event::Start(e) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                if name == "feed" {
                    current = Some((None, None, Vec::new()));
                }
                path.push(name);
            }
            Event::End(_) => {
                if path.pop().as_deref() == Some("feed") {
                    let (id, created, values) = current.take().expect("feed element open");
                    let id = id.ok_or_else(|| validation("feed without entry-id"))?;
                    let created = created.ok_or_else(|| validation("feed without created-at"))?;
                    out.push(entry_with(id, &created, values)?);
                }
            }
            Event::Text(t) => {
                let text = t.decode().map_err(xml_err)?.into_owned();
                let in_feed = path.len() >= 2 && path[path.len() - 2] == "feed";
                if let (true, Some(cur), Some(tag)) = (in_feed, current.as_mut(), path.last()) {
                    match tag.as_str() {
                        "entry-id" => cur.0 = Some(text.trim().parse().map_err(|_| validation("bad entry-id"))?),
                        "created-at" => cur.1 = Some(text),
                        other => {
                            if let Some(i) = field_index(other) {
                                cur.2.push((i, parse_number(&text, other)?));
                            }
                        }
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    Ok(out)
}
