//! Backend configuration and its TOML file form.
//!
//! ```toml
//! name = "neo4j"
//!
//! [endpoint]
//! url = "http://localhost:7474/db/neo4j/tx/commit"
//! user = "neo4j"
//! password = "secret"
//!
//! [templates]
//! bulk_nodes = "..."
//! bulk_edges = "..."
//! single_node = "..."
//! single_edge = "..."
//! shortest_path = "..."
//! update_edge = "..."
//! delete_edge = "..."
//!
//! [reset]
//! command = "docker restart neo4j"
//! ready_probe = "http://localhost:7474/"
//! ```
//!
//! Optional extras: `endpoint.timeout_s`, `endpoint.content_type`,
//! `templates.clear`, `[response] nodes/cost/errors` (JSON pointers into the
//! shortest-path response) and `[ram] probe_url/pointer`.

use std::path::Path;
use std::time::Duration;

use serde::Deserialize;

use super::template;
use super::BackendError;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum BackendConfig {
    Reference,
    External(ExternalConfig),
}

impl BackendConfig {
    pub fn label(&self) -> &str {
        match self {
            BackendConfig::Reference => "reference",
            BackendConfig::External(c) => &c.label,
        }
    }

    /// `reference` selects the built-in engine; anything else is a config file path.
    pub fn from_arg(arg: &str) -> Result<Self, BackendError> {
        if arg == "reference" {
            Ok(BackendConfig::Reference)
        } else {
            ExternalConfig::load(Path::new(arg)).map(BackendConfig::External)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Templates {
    pub bulk_nodes: String,
    pub bulk_edges: String,
    pub single_node: String,
    pub single_edge: String,
    pub shortest_path: String,
    pub update_edge: Option<String>,
    pub delete_edge: Option<String>,
    pub clear: Option<String>,
}

/// Where the adapter finds path data in a shortest-path response.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseMapping {
    pub nodes: String,
    pub cost: String,
    /// A non-empty value at this pointer marks the response as a query error.
    pub errors: Option<String>,
}

impl Default for ResponseMapping {
    fn default() -> Self {
        ResponseMapping {
            nodes: "/nodes".into(),
            cost: "/cost".into(),
            errors: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamProbeConfig {
    pub url: String,
    /// JSON pointer to a byte count; when absent the body is the number itself.
    pub pointer: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExternalConfig {
    pub label: String,
    pub url: String,
    pub user: Option<String>,
    pub password: Option<String>,
    pub content_type: String,
    pub timeout: Duration,
    pub templates: Templates,
    pub reset_command: Option<String>,
    pub ready_probe: Option<String>,
    pub response: ResponseMapping,
    pub ram: Option<RamProbeConfig>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawFile {
    name: Option<String>,
    #[serde(default)]
    endpoint: RawEndpoint,
    #[serde(default)]
    templates: RawTemplates,
    #[serde(default)]
    reset: RawReset,
    #[serde(default)]
    response: RawResponse,
    ram: Option<RawRam>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawEndpoint {
    url: Option<String>,
    user: Option<String>,
    password: Option<String>,
    timeout_s: Option<f64>,
    content_type: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTemplates {
    bulk_nodes: Option<String>,
    bulk_edges: Option<String>,
    single_node: Option<String>,
    single_edge: Option<String>,
    shortest_path: Option<String>,
    update_edge: Option<String>,
    delete_edge: Option<String>,
    clear: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawReset {
    command: Option<String>,
    ready_probe: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawResponse {
    nodes: Option<String>,
    cost: Option<String>,
    errors: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRam {
    probe_url: String,
    pointer: Option<String>,
}

impl ExternalConfig {
    pub fn load(path: &Path) -> Result<Self, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::Config(format!("{}: {e}", path.display())))?;
        let fallback = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "external".into());
        Self::parse(&text, &fallback)
    }

    pub fn parse(text: &str, default_label: &str) -> Result<Self, BackendError> {
        let raw: RawFile =
            toml::from_str(text).map_err(|e| BackendError::Config(format!("invalid config: {e}")))?;
        let url = raw
            .endpoint
            .url
            .ok_or_else(|| BackendError::Config("missing endpoint.url".into()))?;
        let t = raw.templates;
        let required = |name: &str, v: Option<String>| {
            v.ok_or_else(|| BackendError::Config(format!("missing templates.{name}")))
        };
        let templates = Templates {
            bulk_nodes: required("bulk_nodes", t.bulk_nodes)?,
            bulk_edges: required("bulk_edges", t.bulk_edges)?,
            single_node: required("single_node", t.single_node)?,
            single_edge: required("single_edge", t.single_edge)?,
            shortest_path: required("shortest_path", t.shortest_path)?,
            update_edge: t.update_edge,
            delete_edge: t.delete_edge,
            clear: t.clear,
        };
        let sp = template::placeholders(&templates.shortest_path);
        if !sp.contains(&"start") || !sp.contains(&"goal") {
            log::warn!("templates.shortest_path lacks a {{start}} or {{goal}} placeholder");
        }
        let timeout = match raw.endpoint.timeout_s {
            Some(s) if s.is_finite() && s > 0.0 => Duration::from_secs_f64(s),
            Some(s) => return Err(BackendError::Config(format!("invalid endpoint.timeout_s {s}"))),
            None => DEFAULT_TIMEOUT,
        };
        let defaults = ResponseMapping::default();
        Ok(ExternalConfig {
            label: raw.name.unwrap_or_else(|| default_label.to_string()),
            url,
            user: raw.endpoint.user,
            password: raw.endpoint.password,
            content_type: raw
                .endpoint
                .content_type
                .unwrap_or_else(|| "application/json".into()),
            timeout,
            templates,
            reset_command: raw.reset.command,
            ready_probe: raw.reset.ready_probe,
            response: ResponseMapping {
                nodes: raw.response.nodes.unwrap_or(defaults.nodes),
                cost: raw.response.cost.unwrap_or(defaults.cost),
                errors: raw.response.errors,
            },
            ram: raw.ram.map(|r| RamProbeConfig {
                url: r.probe_url,
                pointer: r.pointer,
            }),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
name = "mock"
[endpoint]
url = "http://127.0.0.1:1/q"
user = "u"
password = "p"
[templates]
bulk_nodes = "N {nodes}"
bulk_edges = "E {edges}"
single_node = "n {id}"
single_edge = "e {from} {to} {weight}"
shortest_path = "sp {start} {goal}"
update_edge = "u {from} {to} {weight}"
delete_edge = "d {from} {to}"
[reset]
command = "true"
ready_probe = "true"
"#;

    #[test]
    fn parses_all_keys() {
        let c = ExternalConfig::parse(FULL, "x").unwrap();
        assert_eq!(c.label, "mock");
        assert_eq!(c.user.as_deref(), Some("u"));
        assert_eq!(c.timeout, DEFAULT_TIMEOUT);
        assert_eq!(c.templates.delete_edge.as_deref(), Some("d {from} {to}"));
        assert_eq!(c.reset_command.as_deref(), Some("true"));
        assert_eq!(c.response, ResponseMapping::default());
    }

    #[test]
    fn missing_shortest_path_template() {
        let text = FULL.replace("shortest_path = \"sp {start} {goal}\"\n", "");
        let err = ExternalConfig::parse(&text, "x").unwrap_err();
        assert!(matches!(err, BackendError::Config(ref m) if m.contains("shortest_path")), "{err}");
    }

    #[test]
    fn rejects_unknown_keys_and_missing_url() {
        assert!(ExternalConfig::parse("[endpoint]\nurll = \"x\"\n", "x").is_err());
        let err = ExternalConfig::parse("[templates]\n", "x").unwrap_err();
        assert!(matches!(err, BackendError::Config(ref m) if m.contains("endpoint.url")));
    }
}
