//! Template-driven adapter for graph stores reached over HTTP.
//!
//! Every operation renders its template with `{param}` values, POSTs the
//! result to `endpoint.url` and checks the status. Shortest-path responses are
//! decoded through the configured JSON pointers.

use std::process::Command;
use std::thread;
use std::time::{Duration, Instant};

use base64::Engine as _;
use serde_json::Value;
use ureq::Agent;

use super::config::ExternalConfig;
use super::template::render;
use super::{Backend, BackendError};
use crate::dataset::{GraphDataset, NodeId, Weight, WeightedEdge};
use crate::graphcore::Path;

const READY_POLL: Duration = Duration::from_millis(200);

pub struct ExternalBackend {
    config: ExternalConfig,
    agent: Agent,
    auth: Option<String>,
}

impl ExternalBackend {
    /// Builds the adapter and checks that the endpoint answers. Any HTTP
    /// status other than 401/403 counts as reachable.
    pub fn connect(config: ExternalConfig) -> Result<Self, BackendError> {
        let agent: Agent = Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let auth = config.user.as_ref().map(|user| {
            let pass = config.password.as_deref().unwrap_or("");
            let token = base64::engine::general_purpose::STANDARD.encode(format!("{user}:{pass}"));
            format!("Basic {token}")
        });
        let backend = ExternalBackend {
            config,
            agent,
            auth,
        };
        let mut req = backend.agent.get(&backend.config.url);
        if let Some(a) = &backend.auth {
            req = req.header("Authorization", a);
        }
        let resp = req.call().map_err(transport)?;
        match resp.status().as_u16() {
            401 | 403 => Err(BackendError::Auth(format!(
                "{} answered {}",
                backend.config.url,
                resp.status()
            ))),
            _ => Ok(backend),
        }
    }

    pub fn config(&self) -> &ExternalConfig {
        &self.config
    }

    fn post(&self, body: String) -> Result<String, BackendError> {
        let mut req = self
            .agent
            .post(&self.config.url)
            .header("Content-Type", &self.config.content_type);
        if let Some(a) = &self.auth {
            req = req.header("Authorization", a);
        }
        let mut resp = req.send(body).map_err(transport)?;
        let status = resp.status().as_u16();
        let text = resp.body_mut().read_to_string().map_err(transport)?;
        match status {
            200..=299 => {}
            401 | 403 => return Err(BackendError::Auth(format!("status {status}: {text}"))),
            _ => {
                return Err(BackendError::Query {
                    status: Some(status),
                    message: text,
                })
            }
        }
        if let Some(ptr) = &self.config.response.errors {
            if let Ok(v) = serde_json::from_str::<Value>(&text) {
                if let Some(err) = v.pointer(ptr).filter(|e| !is_empty_value(e)) {
                    return Err(BackendError::Query {
                        status: Some(status),
                        message: err.to_string(),
                    });
                }
            }
        }
        Ok(text)
    }

    fn run(&self, template: &str, params: &[(&str, &str)]) -> Result<String, BackendError> {
        self.post(render(template, params))
    }

    fn wait_ready(&self, probe: &str) -> Result<(), BackendError> {
        let deadline = Instant::now() + self.config.timeout;
        loop {
            let ready = if probe.starts_with("http://") || probe.starts_with("https://") {
                self.agent
                    .get(probe)
                    .call()
                    .map(|r| r.status().is_success())
                    .unwrap_or(false)
            } else {
                shell(probe).map(|s| s.success()).unwrap_or(false)
            };
            if ready {
                return Ok(());
            }
            if Instant::now() >= deadline {
                return Err(BackendError::Reset(format!("`{probe}` not ready within timeout")));
            }
            thread::sleep(READY_POLL);
        }
    }

    fn parse_path(&self, body: &str) -> Result<Option<Path>, BackendError> {
        let v: Value = serde_json::from_str(body)
            .map_err(|e| BackendError::Response(format!("shortest-path body is not JSON: {e}")))?;
        let mapping = &self.config.response;
        let nodes = match v.pointer(&mapping.nodes) {
            None | Some(Value::Null) => return Ok(None),
            Some(Value::Array(items)) if items.is_empty() => return Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|item| json_u64(item).map(NodeId))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| BackendError::Response(format!("non-integer node id in {}", mapping.nodes)))?,
            Some(other) => {
                return Err(BackendError::Response(format!(
                    "{} is not an array: {other}",
                    mapping.nodes
                )))
            }
        };
        let total_cost = v
            .pointer(&mapping.cost)
            .and_then(json_u64)
            .ok_or_else(|| BackendError::Response(format!("missing integer cost at {}", mapping.cost)))?;
        Ok(Some(Path { nodes, total_cost }))
    }
}

fn transport(e: ureq::Error) -> BackendError {
    BackendError::Transport(e.to_string())
}

fn shell(cmd: &str) -> std::io::Result<std::process::ExitStatus> {
    Command::new("sh").arg("-c").arg(cmd).status()
}

fn is_empty_value(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::Array(a) => a.is_empty(),
        Value::Object(o) => o.is_empty(),
        Value::String(s) => s.is_empty(),
        Value::Bool(b) => !b,
        Value::Number(_) => false,
    }
}

/// Integer from a JSON number (integral floats accepted) or numeric string.
fn json_u64(v: &Value) -> Option<u64> {
    match v {
        Value::Number(n) => n.as_u64().or_else(|| {
            n.as_f64()
                .filter(|f| *f >= 0.0 && f.fract().abs() < 1e-9)
                .map(|f| f.round() as u64)
        }),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn nodes_json(nodes: &[NodeId]) -> String {
    Value::Array(nodes.iter().map(|n| Value::from(n.0)).collect()).to_string()
}

fn edges_json(edges: &[WeightedEdge]) -> String {
    Value::Array(
        edges
            .iter()
            .map(|e| serde_json::json!({"from": e.from.0, "to": e.to.0, "weight": e.weight}))
            .collect(),
    )
    .to_string()
}

impl Backend for ExternalBackend {
    fn label(&self) -> &str {
        &self.config.label
    }

    /// One request for the node bulk and one for the edge bulk.
    fn bulk_import(&self, g: &GraphDataset) -> Result<(), BackendError> {
        let t = &self.config.templates;
        if !g.nodes.is_empty() {
            let count = g.nodes.len().to_string();
            let nodes = nodes_json(&g.nodes);
            self.run(&t.bulk_nodes, &[("nodes", &nodes), ("count", &count)])?;
        }
        if !g.edges.is_empty() {
            let count = g.edges.len().to_string();
            let edges = edges_json(&g.edges);
            self.run(&t.bulk_edges, &[("edges", &edges), ("count", &count)])?;
        }
        Ok(())
    }

    fn insert_node(&self, id: NodeId) -> Result<(), BackendError> {
        self.run(&self.config.templates.single_node, &[("id", &id.to_string())])
            .map(drop)
    }

    fn insert_edge(&self, e: WeightedEdge) -> Result<(), BackendError> {
        let (from, to, weight) = (e.from.to_string(), e.to.to_string(), e.weight.to_string());
        self.run(
            &self.config.templates.single_edge,
            &[("from", &from), ("to", &to), ("weight", &weight)],
        )
        .map(drop)
    }

    fn shortest_path(&self, start: NodeId, goal: NodeId) -> Result<Option<Path>, BackendError> {
        let (s, g) = (start.to_string(), goal.to_string());
        let body = self.run(&self.config.templates.shortest_path, &[("start", &s), ("goal", &g)])?;
        self.parse_path(&body)
    }

    fn update_edge_weight(
        &self,
        from: NodeId,
        to: NodeId,
        weight: Weight,
    ) -> Result<(), BackendError> {
        let t = self
            .config
            .templates
            .update_edge
            .as_ref()
            .ok_or(BackendError::Unsupported("templates.update_edge"))?;
        let (f, to, w) = (from.to_string(), to.to_string(), weight.to_string());
        self.run(t, &[("from", &f), ("to", &to), ("weight", &w)]).map(drop)
    }

    fn delete_edge(&self, from: NodeId, to: NodeId) -> Result<(), BackendError> {
        let t = self
            .config
            .templates
            .delete_edge
            .as_ref()
            .ok_or(BackendError::Unsupported("templates.delete_edge"))?;
        let (f, to) = (from.to_string(), to.to_string());
        self.run(t, &[("from", &f), ("to", &to)]).map(drop)
    }

    /// Runs `reset.command` and then polls `reset.ready_probe`.
    fn reset(&self) -> Result<(), BackendError> {
        let Some(cmd) = &self.config.reset_command else {
            log::warn!("{}: no reset.command configured, cache not cleared", self.config.label);
            return Ok(());
        };
        let status = shell(cmd).map_err(|e| BackendError::Reset(format!("`{cmd}`: {e}")))?;
        if !status.success() {
            return Err(BackendError::Reset(format!("`{cmd}` exited with {status}")));
        }
        if let Some(probe) = &self.config.ready_probe {
            self.wait_ready(probe)?;
        }
        Ok(())
    }

    fn clear(&self) -> Result<(), BackendError> {
        match &self.config.templates.clear {
            Some(t) => self.run(t, &[]).map(drop),
            None => {
                log::warn!("{}: no templates.clear configured, store not emptied", self.config.label);
                Ok(())
            }
        }
    }

    fn ram_probe(&self) -> Option<u64> {
        let probe = self.config.ram.as_ref()?;
        let mut resp = self.agent.get(&probe.url).call().ok()?;
        if !resp.status().is_success() {
            return None;
        }
        let body = resp.body_mut().read_to_string().ok()?;
        match &probe.pointer {
            Some(ptr) => json_u64(serde_json::from_str::<Value>(&body).ok()?.pointer(ptr)?),
            None => body.trim().parse().ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_integers() {
        assert_eq!(json_u64(&serde_json::json!(5)), Some(5));
        assert_eq!(json_u64(&serde_json::json!(5.0)), Some(5));
        assert_eq!(json_u64(&serde_json::json!(5.5)), None);
        assert_eq!(json_u64(&serde_json::json!("17")), Some(17));
        assert_eq!(json_u64(&serde_json::json!(-1)), None);
    }

    #[test]
    fn payload_encoding() {
        assert_eq!(nodes_json(&[NodeId(0), NodeId(7)]), "[0,7]");
        assert_eq!(
            edges_json(&[WeightedEdge::new(0, 1, 9)]),
            r#"[{"from":0,"to":1,"weight":9}]"#
        );
    }
}
