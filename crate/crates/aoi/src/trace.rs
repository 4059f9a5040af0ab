//! CSV trace of simulated deliveries.

use std::io::Write;

use aoi_core::sim::TraceEvent;

use crate::report::format_float;

pub const TRACE_HEADER: [&str; 5] = [
    "time",
    "event_kind",
    "device",
    "delivered_age",
    "monitor_age_after",
];

/// Streams trace rows; the first write error is kept and reported by
/// [`TraceWriter::finish`].
pub struct TraceWriter<W: Write> {
    out: csv::Writer<W>,
    error: Option<csv::Error>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(inner: W) -> csv::Result<Self> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(inner);
        out.write_record(TRACE_HEADER)?;
        Ok(Self { out, error: None })
    }

    pub fn record(&mut self, e: &TraceEvent) {
        if self.error.is_some() {
            return;
        }
        let row = [
            format_float(e.time),
            e.kind.as_str().to_string(),
            e.device.to_string(),
            format_float(e.delivered_age),
            format_float(e.monitor_age_after),
        ];
        if let Err(err) = self.out.write_record(&row) {
            self.error = Some(err);
        }
    }

    pub fn finish(mut self) -> csv::Result<()> {
        if let Some(err) = self.error.take() {
            return Err(err);
        }
        self.out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use aoi_core::sim::EventKind;

    #[test]
    fn writes_header_and_rows() {
        let mut buf = Vec::new();
        let mut w = TraceWriter::new(&mut buf).unwrap();
        w.record(&TraceEvent {
            time: 1.5,
            kind: EventKind::Type2,
            device: 3,
            delivered_age: 0.0,
            monitor_age_before: 0.7,
            monitor_age_after: 0.0,
            adopted: true,
        });
        w.finish().unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "time,event_kind,device,delivered_age,monitor_age_after\n1.5,type2,3,0,0\n"
        );
    }
}
