use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::thread;

use grb_core::backend::{connect, BackendConfig, ExternalConfig, Operation, OpOutput};
use grb_core::mazegen::{Dimensionality, GridSpec};
use grb_core::workload::run_test;
use grb_core::{BackendError, GraphDataset, NodeId, ReferenceStore, RunConfig, WeightedEdge};
use serde_json::{json, Value};

#[derive(Clone, Debug)]
struct Request {
    method: String,
    path: String,
    auth: Option<String>,
    body: String,
}

type Handler = dyn Fn(&Request) -> (u16, String) + Send + Sync;

struct Mock {
    url: String,
    log: Arc<Mutex<Vec<Request>>>,
}

impl Mock {
    fn start(handler: Arc<Handler>) -> Mock {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}", listener.local_addr().unwrap());
        let log = Arc::new(Mutex::new(Vec::new()));
        let log2 = log.clone();
        thread::spawn(move || {
            for stream in listener.incoming().flatten() {
                let handler = handler.clone();
                let log = log2.clone();
                thread::spawn(move || serve(stream, &*handler, &log));
            }
        });
        Mock { url, log }
    }

    fn requests(&self) -> Vec<Request> {
        self.log.lock().unwrap().clone()
    }

    fn posts(&self) -> Vec<Request> {
        self.requests().into_iter().filter(|r| r.method == "POST").collect()
    }
}

fn serve(stream: TcpStream, handler: &Handler, log: &Mutex<Vec<Request>>) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut line = String::new();
    if reader.read_line(&mut line).unwrap_or(0) == 0 {
        return;
    }
    let mut parts = line.split_whitespace();
    let method = parts.next().unwrap_or_default().to_string();
    let path = parts.next().unwrap_or_default().to_string();
    let mut length = 0usize;
    let mut chunked = false;
    let mut auth = None;
    loop {
        let mut h = String::new();
        reader.read_line(&mut h).unwrap();
        let h = h.trim_end();
        if h.is_empty() {
            break;
        }
        let (k, v) = h.split_once(':').unwrap();
        let v = v.trim();
        match k.to_ascii_lowercase().as_str() {
            "content-length" => length = v.parse().unwrap(),
            "transfer-encoding" => chunked = v.eq_ignore_ascii_case("chunked"),
            "authorization" => auth = Some(v.to_string()),
            _ => {}
        }
    }
    let mut body = Vec::new();
    if chunked {
        loop {
            let mut size = String::new();
            reader.read_line(&mut size).unwrap();
            let n = usize::from_str_radix(size.trim(), 16).unwrap();
            let mut chunk = vec![0; n + 2];
            reader.read_exact(&mut chunk).unwrap();
            if n == 0 {
                break;
            }
            body.extend_from_slice(&chunk[..n]);
        }
    } else {
        body.resize(length, 0);
        reader.read_exact(&mut body).unwrap();
    }
    let req = Request {
        method,
        path,
        auth,
        body: String::from_utf8(body).unwrap(),
    };
    let (status, text) = handler(&req);
    log.lock().unwrap().push(req);
    let mut out = stream;
    let _ = write!(
        out,
        "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{text}",
        text.len()
    );
    let _ = out.flush();
}

const TEMPLATES: &str = r#"
[templates]
bulk_nodes = '{"op":"nodes","ids":{nodes},"n":{count}}'
bulk_edges = '{"op":"edges","edges":{edges},"n":{count}}'
single_node = '{"op":"node","id":{id}}'
single_edge = '{"op":"edge","from":{from},"to":{to},"weight":{weight}}'
shortest_path = '{"op":"sp","start":{start},"goal":{goal}}'
update_edge = '{"op":"update","from":{from},"to":{to},"weight":{weight}}'
delete_edge = '{"op":"delete","from":{from},"to":{to}}'
clear = '{"op":"clear"}'

[response]
nodes = "/result/path"
cost = "/result/cost"
errors = "/error"
"#;

fn config(url: &str, extra: &str) -> ExternalConfig {
    let text = format!("name = \"mock\"\n[endpoint]\nurl = \"{url}/db\"\n{extra}\n{TEMPLATES}");
    ExternalConfig::parse(&text, "x").unwrap()
}

/// A tiny graph server backed by the reference store.
fn engine() -> (Arc<ReferenceStore>, Arc<Handler>) {
    let store = Arc::new(ReferenceStore::new());
    let s = store.clone();
    let handler = move |req: &Request| -> (u16, String) {
        if req.method == "GET" {
            return (200, "{}".into());
        }
        let v: Value = serde_json::from_str(&req.body).unwrap();
        let id = |k: &str| NodeId(v[k].as_u64().unwrap());
        let res = match v["op"].as_str().unwrap() {
            "nodes" => {
                let nodes = v["ids"].as_array().unwrap().iter().map(|x| NodeId(x.as_u64().unwrap())).collect();
                s.bulk_import(&GraphDataset::new(nodes, vec![])).map(|_| json!({}))
            }
            "edges" => {
                let edges = v["edges"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|e| WeightedEdge::new(e["from"].as_u64().unwrap(), e["to"].as_u64().unwrap(), e["weight"].as_u64().unwrap()))
                    .collect();
                s.bulk_import(&GraphDataset::new(vec![], edges)).map(|_| json!({}))
            }
            "node" => s.insert_node(id("id")).map(|_| json!({})),
            "edge" => s
                .insert_edge(WeightedEdge::new(id("from"), id("to"), v["weight"].as_u64().unwrap()))
                .map(|_| json!({})),
            "update" => s.update_edge_weight(id("from"), id("to"), v["weight"].as_u64().unwrap()).map(|_| json!({})),
            "delete" => s.delete_edge(id("from"), id("to")).map(|_| json!({})),
            "clear" => {
                s.clear();
                Ok(json!({}))
            }
            "sp" => s.shortest_path(id("start"), id("goal")).map(|p| match p {
                Some(p) => json!({"result": {"path": p.nodes.iter().map(|n| n.0).collect::<Vec<_>>(), "cost": p.total_cost}}),
                None => json!({"result": {"path": [], "cost": null}}),
            }),
            other => panic!("unknown op {other}"),
        };
        match res {
            Ok(v) => (200, v.to_string()),
            Err(e) => (200, json!({"error": e.to_string()}).to_string()),
        }
    };
    (store, Arc::new(handler))
}

fn ten_nodes() -> GraphDataset {
    let nodes = (0..10u64).map(NodeId).collect();
    let edges = (0..9u64).map(|i| WeightedEdge::new(i, i + 1, i + 1)).collect();
    GraphDataset::new(nodes, edges)
}

#[test]
fn bulk_import_is_two_requests() {
    let (store, handler) = engine();
    let mock = Mock::start(handler);
    let handle = connect(&BackendConfig::External(config(&mock.url, ""))).unwrap();
    assert_eq!(handle.label(), "mock");
    let before = mock.posts().len();
    handle.dispatch(Operation::BulkImport(&ten_nodes())).unwrap();
    let posts = mock.posts();
    assert_eq!(posts.len() - before, 2);
    assert!(posts[0].body.contains(r#""op":"nodes""#));
    assert!(posts[1].body.contains(r#""op":"edges""#));
    assert!(posts.iter().all(|r| r.path == "/db"));
    assert_eq!(store.node_count(), 10);
    assert_eq!(store.edge_count(), 9);
}

#[test]
fn queries_hit_the_mock_and_parse() {
    let (_, handler) = engine();
    let mock = Mock::start(handler);
    let handle = connect(&BackendConfig::External(config(&mock.url, ""))).unwrap();
    handle.bulk_import(&ten_nodes()).unwrap();
    let p = handle.shortest_path(NodeId(2), NodeId(5)).unwrap().unwrap();
    assert_eq!(p.nodes, vec![NodeId(2), NodeId(3), NodeId(4), NodeId(5)]);
    assert_eq!(p.total_cost, 3 + 4 + 5);
    assert_eq!(mock.posts().last().unwrap().body, r#"{"op":"sp","start":2,"goal":5}"#);
    assert_eq!(handle.shortest_path(NodeId(5), NodeId(2)).unwrap(), None);

    match handle.dispatch(Operation::UpdateEdgeWeight { from: NodeId(3), to: NodeId(4), weight: 0 }).unwrap() {
        OpOutput::Ack => {}
        other => panic!("{other:?}"),
    }
    assert_eq!(handle.shortest_path(NodeId(2), NodeId(5)).unwrap().unwrap().total_cost, 8);
    handle.delete_edge(NodeId(3), NodeId(4)).unwrap();
    assert_eq!(handle.shortest_path(NodeId(2), NodeId(5)).unwrap(), None);

    // Engine-side errors surface as query errors, not transport errors.
    let err = handle.delete_edge(NodeId(3), NodeId(4)).unwrap_err();
    assert!(matches!(err, BackendError::Query { .. }), "{err:?}");
    assert!(!err.is_transport());
}

#[test]
fn basic_auth_and_rejection() {
    let handler: Arc<Handler> = Arc::new(|r: &Request| match r.auth.as_deref() {
        Some("Basic dTpw") => (200, "{}".into()),
        _ => (401, "no".into()),
    });
    let mock = Mock::start(handler);
    let ok = config(&mock.url, "user = \"u\"\npassword = \"p\"");
    connect(&BackendConfig::External(ok)).unwrap();
    let bad = config(&mock.url, "user = \"u\"\npassword = \"wrong\"");
    let err = connect(&BackendConfig::External(bad)).unwrap_err();
    assert!(matches!(err, BackendError::Auth(_)), "{err:?}");
}

#[test]
fn unreachable_endpoint_is_transport_error() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let cfg = config(&format!("http://127.0.0.1:{port}"), "timeout_s = 2");
    let err = connect(&BackendConfig::External(cfg)).unwrap_err();
    assert!(err.is_transport(), "{err:?}");
    assert!(matches!(err, BackendError::Transport(_)));
}

#[test]
fn server_errors_are_query_errors() {
    let handler: Arc<Handler> = Arc::new(|r: &Request| {
        if r.method == "GET" {
            (200, "{}".into())
        } else {
            (500, "syntax error".into())
        }
    });
    let mock = Mock::start(handler);
    let handle = connect(&BackendConfig::External(config(&mock.url, ""))).unwrap();
    match handle.insert_node(NodeId(1)).unwrap_err() {
        BackendError::Query { status, message } => {
            assert_eq!(status, Some(500));
            assert_eq!(message, "syntax error");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_template_is_config_error() {
    let text = "[endpoint]\nurl = \"http://127.0.0.1:9/\"\n[templates]\nbulk_nodes = \"a\"\nbulk_edges = \"b\"\nsingle_node = \"c\"\nsingle_edge = \"d\"\n";
    let err = ExternalConfig::parse(text, "x").unwrap_err();
    assert!(matches!(err, BackendError::Config(ref m) if m.contains("shortest_path")), "{err:?}");
}

#[test]
fn reset_runs_command_before_next_query() {
    let dir = tempfile::tempdir().unwrap();
    let marker: PathBuf = dir.path().join("restarted");
    let seen = Arc::new(Mutex::new(Vec::new()));
    let (_, inner) = engine();
    let (m, s) = (marker.clone(), seen.clone());
    let handler: Arc<Handler> = Arc::new(move |r: &Request| {
        s.lock().unwrap().push((r.method.clone(), r.path.clone(), m.exists()));
        inner(r)
    });
    let mock = Mock::start(handler);
    let extra = format!(
        "[reset]\ncommand = \"touch '{}'\"\nready_probe = \"{}/ready\"",
        marker.display(),
        mock.url
    );
    let text = format!("name = \"mock\"\n[endpoint]\nurl = \"{}/db\"\n{TEMPLATES}\n{extra}", mock.url);
    let cfg = ExternalConfig::parse(&text, "x").unwrap();
    let handle = connect(&BackendConfig::External(cfg)).unwrap();
    handle.bulk_import(&ten_nodes()).unwrap();
    assert!(!marker.exists());
    handle.dispatch(Operation::Reset).unwrap();
    assert!(marker.exists());
    handle.shortest_path(NodeId(0), NodeId(9)).unwrap();

    let seen = seen.lock().unwrap();
    let probe = seen.iter().position(|(m, p, _)| m == "GET" && p == "/ready").unwrap();
    assert!(seen[probe].2, "probe ran before the reset command");
    let last = seen.last().unwrap();
    assert_eq!(last.0, "POST");
    assert!(last.2);
    assert!(seen[..probe].iter().all(|(_, _, m)| !m));
}

#[test]
fn ram_probe_absent_or_read() {
    let (_, inner) = engine();
    let handler: Arc<Handler> = Arc::new(move |r: &Request| match r.path.as_str() {
        "/stats" => (200, r#"{"memory":{"usage":123456}}"#.into()),
        "/missing" => (404, "".into()),
        _ => inner(r),
    });
    let mock = Mock::start(handler);
    let none = connect(&BackendConfig::External(config(&mock.url, ""))).unwrap();
    assert_eq!(none.ram_probe(), None);

    let with = |tail: &str| {
        let text = format!("[endpoint]\nurl = \"{}/db\"\n{TEMPLATES}\n{tail}", mock.url);
        connect(&BackendConfig::External(ExternalConfig::parse(&text, "x").unwrap())).unwrap()
    };
    let good = with(&format!("[ram]\nprobe_url = \"{}/stats\"\npointer = \"/memory/usage\"", mock.url));
    assert_eq!(good.ram_probe(), Some(123_456));
    let broken = with(&format!("[ram]\nprobe_url = \"{}/missing\"", mock.url));
    assert_eq!(broken.ram_probe(), None);
}

#[test]
fn same_costs_as_reference_and_no_probe_no_abort() {
    let (_, handler) = engine();
    let mock = Mock::start(handler);
    let external = connect(&BackendConfig::External(config(&mock.url, ""))).unwrap();
    let reference = connect(&BackendConfig::Reference).unwrap();
    let run = RunConfig {
        grid: GridSpec::square(Dimensionality::TwoD, 12).unwrap(),
        repetitions: 2,
        queries: 4,
        ..RunConfig::default()
    };
    let a = run_test(&run, &external).unwrap();
    let b = run_test(&run, &reference).unwrap();
    assert!(a.is_complete(), "{:?}", a.error);
    let costs = |o: &grb_core::RunOutcome| {
        o.repetitions
            .iter()
            .flat_map(|r| r.routes.iter().map(|x| x.map(|x| x.cost)))
            .collect::<Vec<_>>()
    };
    assert_eq!(costs(&a), costs(&b));
    let s = a.summary(grb_core::Phase::PathSearch).unwrap();
    assert_eq!(s.mean_ram, None);
    assert!(b.summary(grb_core::Phase::PathSearch).unwrap().mean_ram.unwrap() > 0.0);
}
