use std::fmt;
use std::io::Write;
use std::sync::{Arc, Mutex};

use serde_json::json;

use super::Message;
use crate::graph::{Edge, NodeId};

pub const TRACE_SCHEMA: u32 = 1;

/// Shared JSON-lines writer; one record per delivered message.
#[derive(Clone)]
pub struct TraceSink(Arc<Mutex<Box<dyn Write + Send>>>);

impl fmt::Debug for TraceSink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TraceSink")
    }
}

impl TraceSink {
    pub fn new(w: impl Write + Send + 'static) -> Self {
        TraceSink(Arc::new(Mutex::new(Box::new(w))))
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn record(&self, phase: &str, round: u64, e: Edge, edge: usize, from: NodeId, to: NodeId, msg: &Message) {
        let direction = if from == e.u { "fwd" } else { "rev" };
        let line = json!({
            "schema": TRACE_SCHEMA,
            "phase": phase,
            "round": round,
            "edge": edge,
            "direction": direction,
            "from": from,
            "to": to,
            "tag": msg.tag,
            "payload": [msg.a, msg.b],
        });
        let mut w = self.0.lock().unwrap_or_else(|p| p.into_inner());
        let _ = writeln!(w, "{line}");
    }

    pub fn flush(&self) {
        let mut w = self.0.lock().unwrap_or_else(|p| p.into_inner());
        let _ = w.flush();
    }
}
