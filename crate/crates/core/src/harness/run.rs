//! Harness runtime: one manager thread per system, a directory thread, and
//! a transport between managers.
//!
//! Managers share no mutable state. They learn about each other from the
//! directory, which announces every new manager to those already joined,
//! and exchange [`Frame`]s over channels or TCP. Steps of a scenario run one
//! at a time, so the transcript is deterministic.

use std::collections::BTreeMap;
use std::io::BufReader;
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::Arc;
use std::thread::{self, JoinHandle};

use super::pipeline::{check_conversion, emit_target, realize_target, run_source};
use super::registry::{System, SystemRegistry};
use super::scenario::{Scenario, TransportKind};
use super::transport::Frame;
use super::{HarnessError, ManagerState, StageError, StateMachine};
use crate::codec::{self, parse_abox, RawMessage};
use crate::ec::Observations;
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectoryEntry {
    pub system: Symbol,
    pub address: String,
}

#[derive(Debug, Clone)]
enum Route {
    Channel(Sender<Inbound>),
    Tcp(SocketAddr),
}

#[derive(Debug, Clone)]
struct Peer {
    entry: DirectoryEntry,
    route: Route,
}

#[derive(Debug)]
enum Inbound {
    Submit(RawMessage),
    Wire(String),
    Received(Result<Frame, String>),
    Joined(Peer),
    Shutdown,
}

enum DirRequest {
    Register {
        peer: Peer,
        inbox: Sender<Inbound>,
        reply: Sender<Result<Vec<Peer>, String>>,
    },
    Lookup {
        system: Symbol,
        reply: Sender<Option<Peer>>,
    },
    Shutdown,
}

/// A message handed to an agent, with where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery {
    pub system: Symbol,
    pub agent: Symbol,
    pub address: String,
    pub message: RawMessage,
    pub source_message: Symbol,
    pub from: Symbol,
    /// Pipeline stages applied, empty for same-system delivery.
    pub stages: Vec<String>,
}

enum Report {
    Line(String),
    Ready,
    Finished(Result<Delivery, String>),
}

#[derive(Debug, Clone, Default)]
pub struct HarnessOutcome {
    pub transcript: Vec<String>,
    pub deliveries: Vec<Delivery>,
    pub failures: Vec<String>,
}

impl HarnessOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }

    pub fn transcript_text(&self) -> String {
        let mut s = self.transcript.join("\n");
        s.push('\n');
        s
    }
}

/// Client handle of the directory service.
#[derive(Clone)]
pub struct Directory {
    tx: Sender<DirRequest>,
}

impl Directory {
    fn spawn(log: Sender<Report>) -> (Directory, JoinHandle<()>) {
        let (tx, rx) = channel::<DirRequest>();
        let handle = thread::spawn(move || {
            let mut joined: BTreeMap<Symbol, (Peer, Sender<Inbound>)> = BTreeMap::new();
            for req in rx {
                match req {
                    DirRequest::Register { peer, inbox, reply } => {
                        let id = peer.entry.system.clone();
                        if joined.contains_key(&id) {
                            let _ = reply.send(Err(format!("system {id} already joined")));
                            continue;
                        }
                        for (_, notify) in joined.values() {
                            let _ = notify.send(Inbound::Joined(peer.clone()));
                        }
                        let existing = joined.values().map(|(p, _)| p.clone()).collect();
                        let _ = log.send(Report::Line(format!(
                            "directory: {id} joined at {}",
                            peer.entry.address
                        )));
                        joined.insert(id, (peer, inbox));
                        let _ = reply.send(Ok(existing));
                    }
                    DirRequest::Lookup { system, reply } => {
                        let _ = reply.send(joined.get(&system).map(|(p, _)| p.clone()));
                    }
                    DirRequest::Shutdown => break,
                }
            }
        });
        (Directory { tx }, handle)
    }

    fn register(&self, peer: Peer, inbox: Sender<Inbound>) -> Result<Vec<Peer>, String> {
        let (reply, rx) = channel();
        self.tx
            .send(DirRequest::Register { peer, inbox, reply })
            .map_err(|e| e.to_string())?;
        rx.recv().map_err(|e| e.to_string())?
    }

    fn lookup(&self, system: &Symbol) -> Option<Peer> {
        let (reply, rx) = channel();
        self.tx
            .send(DirRequest::Lookup {
                system: system.clone(),
                reply,
            })
            .ok()?;
        rx.recv().ok().flatten()
    }

    /// Systems currently joined.
    pub fn entries(&self, systems: impl IntoIterator<Item = Symbol>) -> Vec<DirectoryEntry> {
        systems
            .into_iter()
            .filter_map(|s| self.lookup(&s))
            .map(|p| p.entry)
            .collect()
    }
}

struct Context {
    registry: Arc<SystemRegistry>,
    check: bool,
    refuse: bool,
    /// Context observations keyed by message id.
    gamma: BTreeMap<Symbol, Observations>,
}

struct Manager {
    system: System,
    ctx: Arc<Context>,
    directory: Directory,
    peers: BTreeMap<Symbol, Peer>,
    sm: StateMachine,
    log: Sender<Report>,
}

impl Manager {
    fn line(&self, text: String) {
        let _ = self
            .log
            .send(Report::Line(format!("  {}: {text}", self.system.id)));
    }

    fn finish(&mut self, result: Result<Delivery, String>) {
        if let Err(e) = &result {
            tracing::warn!(system = %self.system.id, error = %e, "message not delivered");
        }
        if !matches!(self.sm.state(), ManagerState::Dispatching) {
            self.sm.reset();
        } else {
            self.sm.advance(ManagerState::Idle);
        }
        let _ = self.log.send(Report::Finished(result));
    }

    fn log_states(&self, from: usize) {
        let names: Vec<String> = self.sm.history()[from..]
            .iter()
            .map(|s| s.to_string())
            .collect();
        if !names.is_empty() {
            self.line(names.join(" -> "));
        }
    }

    fn fail(&mut self, source: StageError) -> String {
        let reason = source.to_string();
        let stage = self.sm.state().clone();
        self.sm.advance(ManagerState::Error(reason.clone()));
        self.line(format!("{}", self.sm.state()));
        HarnessError::Stage {
            system: self.system.id.clone(),
            stage,
            source,
        }
        .to_string()
    }

    fn submit(&mut self, raw: RawMessage) {
        let start = self.sm.history().len();
        let source = match run_source(&self.system, &raw, &mut self.sm) {
            Ok(s) => s,
            Err(e) => {
                self.log_states(start);
                return self.finish(Err(e.to_string()));
            }
        };
        self.log_states(start);
        self.line(format!("{} derived at source", source.derivations.len()));
        let receiver = source.envelope.receiver.clone();
        let Some(target) = self
            .ctx
            .registry
            .system_of_agent(receiver.as_str())
            .map(|s| s.id.clone())
        else {
            let e = self.fail(StageError::UnknownAgent(receiver));
            return self.finish(Err(e));
        };
        if target == self.system.id {
            let address = self
                .system
                .agents
                .get(&receiver)
                .cloned()
                .unwrap_or_default();
            self.line(format!("same system, delivered to {receiver} at {address}"));
            let d = Delivery {
                system: target.clone(),
                agent: receiver,
                address,
                message: raw,
                source_message: source.message,
                from: self.system.id.clone(),
                stages: Vec::new(),
            };
            return self.finish(Ok(d));
        }
        let peer = match self
            .peers
            .get(&target)
            .cloned()
            .or_else(|| self.directory.lookup(&target))
        {
            Some(p) => p,
            None => {
                let e = self.fail(StageError::DirectoryMiss(target));
                return self.finish(Err(e));
            }
        };
        let frame = Frame::new(
            source.message.clone(),
            self.system.id.clone(),
            target.clone(),
            source.payload,
        );
        self.line(format!(
            "CONVERT {} {} {} ({} assertions)",
            frame.message,
            frame.from,
            frame.to,
            source.m_sat.len()
        ));
        let sent = match &peer.route {
            Route::Channel(tx) => tx
                .send(Inbound::Wire(frame.encode()))
                .map_err(|e| e.to_string()),
            Route::Tcp(addr) => TcpStream::connect(addr)
                .and_then(|mut s| frame.write_to(&mut s))
                .map_err(|e| e.to_string()),
        };
        match sent {
            Ok(()) => self.sm.advance(ManagerState::Idle),
            Err(e) => {
                let e = self.fail(StageError::Transport(e));
                self.finish(Err(e));
            }
        }
    }

    fn receive(&mut self, frame: Frame) {
        let start = self.sm.history().len();
        let mut target = match realize_target(&self.system, &frame.body, &mut self.sm) {
            Ok(t) => t,
            Err(e) => {
                self.log_states(start);
                return self.finish(Err(e.to_string()));
            }
        };
        if self.ctx.check {
            let from = match self.ctx.registry.system(frame.from.as_str()) {
                Ok(s) => s,
                Err(e) => {
                    let e = self.fail(StageError::Transport(e.to_string()));
                    return self.finish(Err(e));
                }
            };
            let m_sat = parse_abox(&frame.body).expect("payload parsed while realizing");
            let gamma = self
                .ctx
                .gamma
                .get(&frame.message)
                .cloned()
                .unwrap_or_default();
            match check_conversion(
                from,
                &self.system,
                &frame.message,
                &m_sat,
                &target.m_target,
                &gamma,
            ) {
                Ok(report) => {
                    let verdict = if report.satisfactory {
                        "satisfactory"
                    } else {
                        "not satisfactory"
                    };
                    self.line(format!("check: {verdict}"));
                    for o in &report.missing {
                        self.line(format!("missing {}", o.render(&self.ctx.registry.notation)));
                    }
                    if self.ctx.refuse && !report.satisfactory {
                        self.sm.advance(ManagerState::Emitting);
                        self.log_states(start);
                        let e = self.fail(StageError::Unsatisfactory(Box::new(report)));
                        return self.finish(Err(e));
                    }
                }
                Err(e) => {
                    self.log_states(start);
                    let e = self.fail(StageError::Check(e));
                    return self.finish(Err(e));
                }
            }
        }
        if let Err(e) = emit_target(&self.system, &mut target, &mut self.sm) {
            self.log_states(start);
            return self.finish(Err(e.to_string()));
        }
        self.log_states(start);
        self.line(format!("{} derived at target", target.derivations.len()));
        let output = target.output.expect("emitted");
        let agent = codec::parse(&output)
            .map(|m| m.envelope.receiver)
            .unwrap_or_else(|_| Symbol::new(codec::ANONYMOUS));
        let address = self.system.agents.get(&agent).cloned().unwrap_or_default();
        self.line(format!("delivered to {agent} at {address}"));
        for l in output.text.lines() {
            let _ = self.log.send(Report::Line(format!("    | {l}")));
        }
        let d = Delivery {
            system: self.system.id.clone(),
            agent,
            address,
            message: output,
            source_message: frame.message,
            from: frame.from,
            stages: self.sm.history()[start..]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        };
        self.finish(Ok(d));
    }

    fn run(mut self, inbox: Receiver<Inbound>) {
        for msg in inbox {
            match msg {
                Inbound::Submit(raw) => self.submit(raw),
                Inbound::Wire(text) => match Frame::decode(&text) {
                    Ok(f) => self.receive(f),
                    Err(e) => {
                        let e = self.fail(StageError::Transport(e.to_string()));
                        self.finish(Err(e));
                    }
                },
                Inbound::Received(Ok(f)) => self.receive(f),
                Inbound::Received(Err(e)) => {
                    let e = self.fail(StageError::Transport(e));
                    self.finish(Err(e));
                }
                Inbound::Joined(p) => {
                    self.peers.insert(p.entry.system.clone(), p);
                }
                Inbound::Shutdown => break,
            }
        }
    }
}

struct Running {
    inbox: Sender<Inbound>,
    handle: JoinHandle<()>,
    listener: Option<(Arc<AtomicBool>, SocketAddr, JoinHandle<()>)>,
}

fn listen(
    inbox: Sender<Inbound>,
) -> std::io::Result<(Arc<AtomicBool>, SocketAddr, JoinHandle<()>)> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?;
    let stop = Arc::new(AtomicBool::new(false));
    let flag = stop.clone();
    let handle = thread::spawn(move || {
        for stream in listener.incoming() {
            if flag.load(Ordering::SeqCst) {
                break;
            }
            let Ok(stream) = stream else { continue };
            let mut r = BufReader::new(stream);
            loop {
                match Frame::read_from(&mut r) {
                    Ok(Some(f)) => {
                        let _ = inbox.send(Inbound::Received(Ok(f)));
                    }
                    Ok(None) => break,
                    Err(e) => {
                        let _ = inbox.send(Inbound::Received(Err(e.to_string())));
                        break;
                    }
                }
            }
        }
    });
    Ok((stop, addr, handle))
}

/// Runs every step of `scenario`; failures are recorded and the run goes on.
pub fn run_harness(
    registry: Arc<SystemRegistry>,
    scenario: &Scenario,
) -> Result<HarnessOutcome, HarnessError> {
    let (log_tx, log_rx) = channel::<Report>();
    let (directory, dir_handle) = Directory::spawn(log_tx.clone());
    let mut gamma = BTreeMap::new();
    for s in &scenario.steps {
        if let Ok(m) = codec::parse(&s.message) {
            gamma.insert(m.envelope.id.clone(), s.gamma.clone());
        }
    }
    let ctx = Arc::new(Context {
        registry: registry.clone(),
        check: scenario.check,
        refuse: scenario.refuse_unsatisfactory,
        gamma,
    });
    let mut out = HarnessOutcome::default();
    let collect =
        |out: &mut HarnessOutcome, until_ready: bool| -> Option<Result<Delivery, String>> {
            for r in &log_rx {
                match r {
                    Report::Line(l) => out.transcript.push(l),
                    Report::Ready if until_ready => return None,
                    Report::Ready => {}
                    Report::Finished(res) => return Some(res),
                }
            }
            None
        };

    let mut managers: BTreeMap<Symbol, Running> = BTreeMap::new();
    for system in registry.systems() {
        if scenario.offline.contains(&system.id) {
            out.transcript
                .push(format!("directory: {} offline", system.id));
            continue;
        }
        let (tx, rx) = channel::<Inbound>();
        let (route, address, listener) = match scenario.transport {
            TransportKind::Channel => (
                Route::Channel(tx.clone()),
                format!("channel:{}", system.id),
                None,
            ),
            TransportKind::Tcp => {
                let (stop, addr, h) = listen(tx.clone())
                    .map_err(|e| HarnessError::Scenario(format!("cannot listen: {e}")))?;
                (
                    Route::Tcp(addr),
                    format!("tcp:{addr}"),
                    Some((stop, addr, h)),
                )
            }
        };
        let peer = Peer {
            entry: DirectoryEntry {
                system: system.id.clone(),
                address,
            },
            route,
        };
        let manager = Manager {
            system: system.clone(),
            ctx: ctx.clone(),
            directory: directory.clone(),
            peers: BTreeMap::new(),
            sm: StateMachine::new(),
            log: log_tx.clone(),
        };
        let dir = directory.clone();
        let notify = tx.clone();
        let handle = thread::spawn(move || {
            let mut manager = manager;
            match dir.register(peer, notify) {
                Ok(existing) => {
                    for p in existing {
                        manager.peers.insert(p.entry.system.clone(), p);
                    }
                    let _ = manager.log.send(Report::Ready);
                    manager.run(rx);
                }
                Err(e) => {
                    let _ = manager.log.send(Report::Line(format!("directory: {e}")));
                    let _ = manager.log.send(Report::Ready);
                }
            }
        });
        collect(&mut out, true);
        managers.insert(
            system.id.clone(),
            Running {
                inbox: tx,
                handle,
                listener,
            },
        );
    }

    for (i, step) in scenario.steps.iter().enumerate() {
        out.transcript
            .push(format!("step {}: {} sends", i + 1, step.agent));
        let sender = registry
            .system_of_agent(step.agent.as_str())
            .map(|s| s.id.clone());
        let Some(running) = sender.as_ref().and_then(|s| managers.get(s)) else {
            let why = match sender {
                Some(s) => format!("system {s} is offline"),
                None => format!("agent {} belongs to no system", step.agent),
            };
            out.transcript.push(format!("  {why}"));
            out.failures.push(why);
            continue;
        };
        let _ = running.inbox.send(Inbound::Submit(step.message.clone()));
        match collect(&mut out, false) {
            Some(Ok(d)) => out.deliveries.push(d),
            Some(Err(e)) => out.failures.push(e),
            None => out.failures.push("manager stopped".into()),
        }
    }

    for r in managers.values() {
        let _ = r.inbox.send(Inbound::Shutdown);
    }
    for (_, r) in managers {
        let _ = r.handle.join();
        if let Some((stop, addr, h)) = r.listener {
            stop.store(true, Ordering::SeqCst);
            let _ = TcpStream::connect(addr);
            let _ = h.join();
        }
    }
    let _ = directory.tx.send(DirRequest::Shutdown);
    let _ = dir_handle.join();
    Ok(out)
}
