use std::collections::{BTreeMap, BTreeSet};

use super::script::{Directive, DirectiveKind, Scenario, ScenarioParams};
use super::trace::TraceLine;
use crate::discovery::{router_refresh, BootstrapAttempt, DownloadRegistry, IntroductionQueue, SearchEngineDirectory};
use crate::simcore::{Engine, EventKind, EventTrace, Handler, SimEvent, VirtualTime};
use crate::sync::{propose_commit, AttributeList, CommitState, PendingCommit, Scope, UpdateClass, UpdateRound};
use crate::topology::{
    elect_router, form_clusters, next_in_line, subdivide, AddressRange, BeaconMonitor, NeighborhoodMap, NodeAddress,
    NodeRecord, RouterCriteria,
};

const INTRO: &str = "intro";

/// Messages and timers exchanged inside a scenario run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Msg {
    Directive(usize),
    ConnectRequest,
    ConnectAccept,
    Introduce,
    Payload(String),
    QueuedDelivery {
        payload: String,
    },
    CommitRequest(usize),
    CommitAck(usize),
    /// A message that found its target offline, back at the sender.
    Bounce(Box<Msg>),
    IntroDeadline(u64),
    CommitDeadline(usize),
    BeaconTick {
        hood: usize,
        epoch: u64,
    },
    MonitorTick {
        hood: usize,
        epoch: u64,
    },
}

#[derive(Clone, Debug)]
struct Node {
    domain: String,
    record: NodeRecord,
    up: bool,
    hood: Option<usize>,
    attempt: Option<BootstrapAttempt>,
    attrs: AttributeList,
}

#[derive(Clone, Debug)]
struct Hood {
    name: String,
    map: NeighborhoodMap,
    router: Option<NodeAddress>,
    watcher: Option<NodeAddress>,
    monitor: Option<BeaconMonitor>,
    epoch: u64,
}

/// Instances, neighborhoods and registries of one scenario run.
pub struct World {
    scenario: Scenario,
    params: ScenarioParams,
    nodes: BTreeMap<NodeAddress, Node>,
    hoods: Vec<Hood>,
    registry: DownloadRegistry,
    directory: SearchEngineDirectory,
    intros: IntroductionQueue,
    commits: Vec<PendingCommit>,
    pub trace: EventTrace<TraceLine>,
}

impl World {
    pub fn new(scenario: Scenario) -> World {
        let params = scenario.params.clone();
        World {
            registry: DownloadRegistry::new(params.excerpt_cap),
            params,
            scenario,
            nodes: BTreeMap::new(),
            hoods: Vec::new(),
            directory: SearchEngineDirectory::new(),
            intros: IntroductionQueue::new(),
            commits: Vec::new(),
            trace: EventTrace::default(),
        }
    }

    /// Queues every directive on `engine`.
    pub fn schedule_directives(&self, engine: &mut Engine<Msg>) {
        for (i, d) in self.scenario.directives.iter().enumerate() {
            engine.schedule(VirtualTime(d.at), d.addr, EventKind::Timer(Msg::Directive(i)));
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn intros(&self) -> &IntroductionQueue {
        &self.intros
    }

    pub fn commits(&self) -> &[PendingCommit] {
        &self.commits
    }

    pub fn directory(&self) -> &SearchEngineDirectory {
        &self.directory
    }

    /// `(name, members)` of every non-empty neighborhood.
    pub fn neighborhoods(&self) -> Vec<(String, Vec<NodeAddress>)> {
        self.hoods
            .iter()
            .filter(|h| !h.map.is_empty())
            .map(|h| (h.name.clone(), h.map.addresses().collect()))
            .collect()
    }

    pub fn router_of(&self, hood_name: &str) -> Option<NodeAddress> {
        self.hoods.iter().find(|h| h.name == hood_name).and_then(|h| h.router)
    }

    /// Every instance sits in at most one map, and a node's recorded
    /// neighborhood is the one whose map holds it.
    pub fn check_membership(&self) -> Result<(), String> {
        let mut seen = BTreeMap::new();
        for (i, h) in self.hoods.iter().enumerate() {
            for a in h.map.addresses() {
                if let Some(j) = seen.insert(a, i) {
                    return Err(format!("{a} is in {} and {}", self.hoods[j].name, h.name));
                }
            }
        }
        for (a, n) in &self.nodes {
            if n.hood != seen.get(a).copied() {
                return Err(format!(
                    "{a} records neighborhood {:?} but maps say {:?}",
                    n.hood,
                    seen.get(a)
                ));
            }
        }
        Ok(())
    }

    fn label(&self, a: NodeAddress) -> String {
        self.scenario.label(a)
    }

    fn log(&mut self, at: VirtualTime, kind: &'static str, args: &[NodeAddress], fields: Vec<(&'static str, String)>) {
        let line = TraceLine {
            kind: kind.to_string(),
            args: args.iter().map(|&a| self.label(a)).collect(),
            fields: fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        };
        self.trace.push(at, line);
    }

    fn log_hood(
        &mut self,
        at: VirtualTime,
        kind: &'static str,
        hood: usize,
        args: &[NodeAddress],
        fields: Vec<(&'static str, String)>,
    ) {
        let mut line = TraceLine {
            kind: kind.to_string(),
            args: vec![self.hoods[hood].name.clone()],
            fields: fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        };
        line.args.extend(args.iter().map(|&a| self.label(a)));
        self.trace.push(at, line);
    }

    fn labels(&self, addrs: impl IntoIterator<Item = NodeAddress>) -> String {
        let v: Vec<String> = addrs.into_iter().map(|a| self.label(a)).collect();
        if v.is_empty() {
            "-".into()
        } else {
            v.join(",")
        }
    }

    fn is_up(&self, a: NodeAddress) -> bool {
        self.nodes.get(&a).is_some_and(|n| n.up)
    }

    fn criteria(&self) -> RouterCriteria {
        RouterCriteria {
            min_clients: self.params.min_clients,
            min_uptime_fraction: self.params.min_uptime,
            ..RouterCriteria::default()
        }
    }

    fn new_hood(&mut self, map: NeighborhoodMap) -> usize {
        let idx = self.hoods.len();
        self.hoods.push(Hood {
            name: format!("N{}", idx + 1),
            map,
            router: None,
            watcher: None,
            monitor: None,
            epoch: 0,
        });
        idx
    }

    fn record_of(&self, a: NodeAddress) -> NodeRecord {
        let n = &self.nodes[&a];
        let mut r = n.record.clone();
        r.active = n.up;
        r
    }

    fn set_active(&mut self, a: NodeAddress, up: bool) {
        if let Some(h) = self.nodes.get(&a).and_then(|n| n.hood) {
            let _ = self.hoods[h].map.set_active(a, up);
        }
    }

    fn move_into(&mut self, a: NodeAddress, hood: usize) {
        if let Some(old) = self.nodes[&a].hood {
            if old == hood {
                return;
            }
            self.hoods[old].map.remove(a);
        }
        let rec = self.record_of(a);
        self.hoods[hood].map.insert(rec).expect("not yet a member");
        self.nodes.get_mut(&a).expect("known node").hood = Some(hood);
    }

    fn send(&mut self, engine: &mut Engine<Msg>, from: NodeAddress, to: NodeAddress, msg: Msg) {
        engine.send(from, to, msg);
    }

    fn queue_intro(
        &mut self,
        engine: &mut Engine<Msg>,
        now: VirtualTime,
        sender: NodeAddress,
        target: NodeAddress,
        payload: &str,
    ) {
        let deadline = now + VirtualTime(self.params.intro_timeout);
        let id = self.intros.enqueue(sender, target, payload, deadline);
        engine.schedule(deadline, sender, EventKind::Timer(Msg::IntroDeadline(id)));
        self.log(now, "queued", &[sender, target], vec![]);
    }

    fn release_intros(&mut self, engine: &mut Engine<Msg>, now: VirtualTime) {
        let up: BTreeSet<NodeAddress> = self.nodes.iter().filter(|(_, n)| n.up).map(|(a, _)| *a).collect();
        let ready = self
            .intros
            .release(now, |p| up.contains(&p.sender) && up.contains(&p.target));
        for p in ready {
            self.send(engine, p.sender, p.target, Msg::QueuedDelivery { payload: p.payload });
        }
    }

    fn try_next_target(&mut self, engine: &mut Engine<Msg>, now: VirtualTime, a: NodeAddress) {
        let directory = &self.directory;
        let node = self.nodes.get_mut(&a).expect("known node");
        let Some(attempt) = node.attempt.as_mut() else { return };
        match attempt.next_target(directory) {
            Some(t) => {
                self.log(now, "connect-attempt", &[a, t], vec![]);
                self.send(engine, a, t, Msg::ConnectRequest);
            }
            None => {
                let domain = node.domain.clone();
                node.attempt = None;
                self.directory.advertise(a, &domain, false);
                let map = NeighborhoodMap::from_records([self.record_of(a)]).expect("single record");
                let h = self.new_hood(map);
                self.nodes.get_mut(&a).expect("known node").hood = Some(h);
                self.log(now, "isolated", &[a], vec![]);
            }
        }
    }

    fn directive(&mut self, engine: &mut Engine<Msg>, now: VirtualTime, d: &Directive) {
        let a = d.addr;
        match d.kind {
            DirectiveKind::Download => self.download(engine, now, d),
            DirectiveKind::Up => {
                let Some(n) = self.nodes.get_mut(&a) else {
                    return self.unknown(now, a);
                };
                if n.up {
                    return;
                }
                n.up = true;
                let resume = n.hood.is_none() && n.attempt.is_some();
                if n.hood.is_some() {
                    n.attempt = None;
                }
                self.set_active(a, true);
                self.log(now, "up", &[a], vec![]);
                if resume {
                    self.try_next_target(engine, now, a);
                }
                for c in &mut self.commits {
                    c.member_up(a);
                }
                if let Some(h) = self.nodes[&a].hood {
                    if self.hoods[h].router == Some(a) {
                        self.start_beacons(engine, now, h);
                    }
                }
                self.release_intros(engine, now);
            }
            DirectiveKind::Down => {
                let Some(n) = self.nodes.get_mut(&a) else {
                    return self.unknown(now, a);
                };
                if !n.up {
                    return;
                }
                n.up = false;
                self.set_active(a, false);
                self.log(now, "down", &[a], vec![]);
                for i in 0..self.commits.len() {
                    let c = &mut self.commits[i];
                    if c.proposer == a && !c.state().is_resolved() {
                        c.member_down(a, now);
                        let key = c.key.clone();
                        self.log(now, "commit-expired", &[a], vec![("key", key)]);
                    }
                }
            }
            DirectiveKind::Send => {
                let to: NodeAddress = d.opt("to").expect("required").parse().expect("resolved at parse");
                let text = d.opt("value").unwrap_or("").to_string();
                let known_down = self.nodes.get(&to).is_some_and(|n| !n.up)
                    && self.nodes.get(&a).and_then(|n| n.hood) == self.nodes.get(&to).and_then(|n| n.hood);
                if known_down {
                    self.queue_intro(engine, now, a, to, &text);
                } else {
                    self.send(engine, a, to, Msg::Payload(text));
                }
            }
            DirectiveKind::Subdivide => {
                let Some(h) = self.hood_of(now, a) else { return };
                let mass = d
                    .opt("critical_mass")
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(self.params.critical_mass);
                self.split(now, h, mass);
            }
            DirectiveKind::Elect => {
                let Some(h) = self.hood_of(now, a) else { return };
                match elect_router(&self.hoods[h].map, &self.criteria()) {
                    Some(r) => {
                        self.hoods[h].router = Some(r);
                        let domain = self.nodes[&r].domain.clone();
                        self.directory.advertise(r, &domain, true);
                        self.log_hood(now, "elected", h, &[r], vec![]);
                        self.start_beacons(engine, now, h);
                    }
                    None => self.log_hood(now, "no-router", h, &[], vec![]),
                }
            }
            DirectiveKind::Commit => self.commit(engine, now, d),
            DirectiveKind::Round => {
                let Some(h) = self.hood_of(now, a) else { return };
                let size = d
                    .opt("cluster_size")
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(self.params.cluster_size);
                self.round(engine, now, h, size);
            }
            DirectiveKind::Refresh => {
                let Some(h) = self.hood_of(now, a) else { return };
                if self.hoods[h].router != Some(a) {
                    self.log(now, "not-router", &[a], vec![]);
                    return;
                }
                let span = d
                    .opt("span")
                    .and_then(parse_span)
                    .unwrap_or_else(|| AddressRange::new(NodeAddress(a.0 & !0xff), NodeAddress(a.0 | 0xff)));
                let added =
                    router_refresh(a, &mut self.hoods[h].map, &mut self.directory, span).expect("router is a member");
                for &m in &added {
                    if let Some(old) = self.nodes[&m].hood {
                        self.hoods[old].map.remove(m);
                    }
                    self.nodes.get_mut(&m).expect("advertised nodes are known").hood = Some(h);
                    let up = self.is_up(m);
                    let _ = self.hoods[h].map.set_active(m, up);
                    self.log(now, "mapped", &[m, a], vec![]);
                }
                let list = self.labels(added.iter().copied());
                self.log(now, "refreshed", &[a], vec![("added", list)]);
            }
            DirectiveKind::Attr => {
                let Some(n) = self.nodes.get_mut(&a) else {
                    return self.unknown(now, a);
                };
                let scope: Scope = d.opt("scope").unwrap_or("local").parse().unwrap_or(Scope::Local);
                let class: UpdateClass = d
                    .opt("class")
                    .unwrap_or("moderate")
                    .parse()
                    .unwrap_or(UpdateClass::Moderate);
                let key = d.opt("key").expect("required").to_string();
                let value = d.opt("value").expect("required").as_bytes().to_vec();
                match n.attrs.set_local(a, &key, scope, class, value) {
                    Ok(e) => {
                        let version = e.version.to_string();
                        self.log(now, "attr", &[a], vec![("key", key), ("version", version)]);
                    }
                    Err(e) => self.log(now, "attr-rejected", &[a], vec![("reason", e.to_string())]),
                }
            }
        }
    }

    fn unknown(&mut self, now: VirtualTime, a: NodeAddress) {
        self.log(now, "unknown-instance", &[a], vec![]);
    }

    fn hood_of(&mut self, now: VirtualTime, a: NodeAddress) -> Option<usize> {
        let h = self.nodes.get(&a).and_then(|n| n.hood);
        if h.is_none() {
            self.log(now, "no-neighborhood", &[a], vec![]);
        }
        h
    }

    fn download(&mut self, engine: &mut Engine<Msg>, now: VirtualTime, d: &Directive) {
        let a = d.addr;
        let domain = d.opt("domain").unwrap_or("default").to_string();
        let excerpt = self.registry.register_download(a, &domain, now);
        let mut record = NodeRecord::new(a).with_domain(domain.clone());
        if let Some(u) = d.opt("uptime").and_then(|v| v.parse().ok()) {
            record.uptime_fraction = u;
        }
        if let Some(c) = d.opt("capacity").and_then(|v| v.parse().ok()) {
            record.link_capacity_bps = c;
        }
        if let Some(m) = d.opt("metric").and_then(|v| v.parse().ok()) {
            record.metric = m;
        }
        let list = self.labels(excerpt.addresses());
        self.log(now, "download", &[a], vec![("excerpt", list)]);
        let node = self.nodes.entry(a).or_insert_with(|| Node {
            domain: domain.clone(),
            record: record.clone(),
            up: true,
            hood: None,
            attempt: None,
            attrs: AttributeList::new(),
        });
        node.up = true;
        node.record = record;
        if node.hood.is_some() {
            self.set_active(a, true);
            return;
        }
        node.attempt = Some(BootstrapAttempt::new(a, &excerpt));
        self.try_next_target(engine, now, a);
    }

    fn split(&mut self, now: VirtualTime, h: usize, mass: usize) {
        match subdivide(&self.hoods[h].map, mass) {
            Ok((lo, hi)) => {
                let router = self.hoods[h].router;
                self.hoods[h].map = lo;
                let new = self.new_hood(hi);
                let moved: Vec<NodeAddress> = self.hoods[new].map.addresses().collect();
                for m in &moved {
                    self.nodes.get_mut(m).expect("member").hood = Some(new);
                }
                if let Some(r) = router.filter(|r| moved.contains(r)) {
                    self.hoods[h].router = None;
                    self.hoods[h].watcher = None;
                    self.hoods[h].epoch += 1;
                    self.hoods[new].router = Some(r);
                }
                let (lo_n, hi_n) = (self.hoods[h].map.len(), self.hoods[new].map.len());
                let name = self.hoods[new].name.clone();
                self.log_hood(
                    now,
                    "split",
                    h,
                    &[],
                    vec![("into", name), ("sizes", format!("{lo_n}+{hi_n}"))],
                );
            }
            Err(_) => {
                let n = self.hoods[h].map.len().to_string();
                self.log_hood(now, "no-split", h, &[], vec![("members", n)]);
            }
        }
    }

    fn start_beacons(&mut self, engine: &mut Engine<Msg>, now: VirtualTime, h: usize) {
        let Some(r) = self.hoods[h].router else { return };
        let period = VirtualTime(self.params.beacon_period);
        let ttl = VirtualTime(self.params.beacon_ttl);
        let hood = &mut self.hoods[h];
        hood.epoch += 1;
        let epoch = hood.epoch;
        let criteria = RouterCriteria {
            min_clients: self.params.min_clients,
            min_uptime_fraction: self.params.min_uptime,
            ..RouterCriteria::default()
        };
        hood.watcher = next_in_line(&hood.map, &criteria, r);
        let mut monitor = BeaconMonitor::new(ttl);
        monitor.observe(now);
        hood.monitor = Some(monitor);
        engine.schedule(now + period, r, EventKind::Timer(Msg::BeaconTick { hood: h, epoch }));
        if let Some(w) = hood.watcher {
            engine.schedule(now + period, w, EventKind::Timer(Msg::MonitorTick { hood: h, epoch }));
        }
    }

    fn commit(&mut self, engine: &mut Engine<Msg>, now: VirtualTime, d: &Directive) {
        let a = d.addr;
        let Some(h) = self.hood_of(now, a) else { return };
        let key = d.opt("key").expect("required").to_string();
        let value = d.opt("value").expect("required").to_string();
        let timeout = d
            .opt("timeout")
            .and_then(|v| v.parse().ok())
            .unwrap_or(self.params.commit_timeout);
        let group: Vec<NodeAddress> = self.hoods[h].map.addresses().collect();
        let pc = propose_commit(
            a,
            group.iter().copied(),
            &key,
            value.as_bytes(),
            now,
            VirtualTime(timeout),
        )
        .expect("proposer is in its own neighborhood");
        let id = self.commits.len();
        let deadline = pc.deadline;
        self.commits.push(pc);
        self.log(
            now,
            "commit-proposed",
            &[a],
            vec![("key", key), ("group", group.len().to_string())],
        );
        if self.report_commit(now, id) {
            return;
        }
        for m in group.into_iter().filter(|&m| m != a) {
            self.send(engine, a, m, Msg::CommitRequest(id));
        }
        engine.schedule(deadline, a, EventKind::Timer(Msg::CommitDeadline(id)));
    }

    /// Logs a freshly resolved commit; true if resolved.
    fn report_commit(&mut self, now: VirtualTime, id: usize) -> bool {
        let c = &self.commits[id];
        let (proposer, key) = (c.proposer, c.key.clone());
        match c.state().clone() {
            CommitState::Committed { acked, absentees, .. } => {
                let absent = self.labels(absentees);
                self.log(
                    now,
                    "committed",
                    &[proposer],
                    vec![("key", key), ("acks", acked.len().to_string()), ("absent", absent)],
                );
                true
            }
            CommitState::Expired { .. } => true,
            CommitState::Pending => false,
        }
    }

    fn round(&mut self, engine: &mut Engine<Msg>, now: VirtualTime, h: usize, size: usize) {
        let plan = match form_clusters(&self.hoods[h].map, size) {
            Ok(p) => p,
            Err(e) => {
                self.log_hood(now, "round-skipped", h, &[], vec![("reason", e.to_string())]);
                return;
            }
        };
        let lists: BTreeMap<NodeAddress, AttributeList> = plan
            .members()
            .iter()
            .map(|&m| (m, self.nodes[&m].attrs.clone()))
            .collect();
        let mut round = UpdateRound::start(&plan, &lists, now).expect("every member has a list");
        let finished = round.run(engine);
        for (&m, list) in round.lists() {
            self.nodes.get_mut(&m).expect("member").attrs = list.clone();
        }
        let fields = vec![
            ("messages", round.message_count().to_string()),
            ("converged", round.converged().to_string()),
            ("finished", finished.units().to_string()),
        ];
        self.log_hood(now, "round", h, &[], fields);
    }

    fn deliver(&mut self, engine: &mut Engine<Msg>, now: VirtualTime, from: NodeAddress, to: NodeAddress, msg: Msg) {
        if !self.is_up(to) {
            match msg {
                Msg::ConnectRequest | Msg::Introduce | Msg::Payload(_) | Msg::QueuedDelivery { .. } => {
                    let back = engine.hop_delay(from);
                    engine.schedule_in(
                        back,
                        from,
                        EventKind::Deliver {
                            from: to,
                            msg: Msg::Bounce(Box::new(msg)),
                        },
                    );
                }
                _ => {}
            }
            return;
        }
        match msg {
            Msg::ConnectRequest => {
                let Some(h) = self.nodes[&to].hood else {
                    // still joining itself: no map to share
                    let back = engine.hop_delay(from);
                    engine.schedule_in(
                        back,
                        from,
                        EventKind::Deliver {
                            from: to,
                            msg: Msg::Bounce(Box::new(Msg::ConnectRequest)),
                        },
                    );
                    return;
                };
                if self.nodes.get(&from).is_some_and(|n| n.hood.is_none()) {
                    self.move_into(from, h);
                    self.directory.deregister(to);
                    self.send(engine, to, from, Msg::ConnectAccept);
                }
            }
            Msg::ConnectAccept => {
                let node = self.nodes.get_mut(&to).expect("known");
                if let Some(att) = node.attempt.as_mut() {
                    att.record_success(from);
                }
                node.attempt = None;
                self.directory.deregister(to);
                self.log(now, "connect", &[to, from], vec![]);
                let h = self.nodes[&to].hood.expect("joined on request");
                let others: Vec<(NodeAddress, bool)> = self.hoods[h]
                    .map
                    .members()
                    .iter()
                    .filter(|r| r.address != to && r.address != from)
                    .map(|r| (r.address, r.active))
                    .collect();
                for (m, active) in others {
                    if active {
                        self.send(engine, to, m, Msg::Introduce);
                    } else {
                        self.queue_intro(engine, now, to, m, INTRO);
                    }
                }
                if self.hoods[h].map.len() > self.params.critical_mass {
                    let mass = self.params.critical_mass;
                    self.split(now, h, mass);
                }
            }
            Msg::Introduce => self.log(now, "introduced", &[from, to], vec![]),
            Msg::Payload(text) => self.log(now, "message", &[from, to], vec![("value", text)]),
            Msg::QueuedDelivery { payload } => {
                let fields = if payload == INTRO {
                    vec![]
                } else {
                    vec![("value", payload)]
                };
                self.log(now, "delivered", &[from, to], fields);
            }
            Msg::CommitRequest(id) => self.send(engine, to, from, Msg::CommitAck(id)),
            Msg::CommitAck(id) => {
                let was = self.commits[id].state().is_resolved();
                if self.commits[id].ack(from, now).is_ok() && !was {
                    self.report_commit(now, id);
                }
            }
            Msg::Bounce(inner) => self.bounced(engine, now, to, from, *inner),
            Msg::Directive(_)
            | Msg::IntroDeadline(_)
            | Msg::CommitDeadline(_)
            | Msg::BeaconTick { .. }
            | Msg::MonitorTick { .. } => {}
        }
    }

    fn bounced(
        &mut self,
        engine: &mut Engine<Msg>,
        now: VirtualTime,
        sender: NodeAddress,
        target: NodeAddress,
        msg: Msg,
    ) {
        match msg {
            Msg::ConnectRequest => {
                self.log(now, "connect-fail", &[sender, target], vec![]);
                let still_joining = self.nodes.get_mut(&sender).and_then(|n| n.attempt.as_mut()).map(|att| {
                    att.record_failure(target);
                });
                if still_joining.is_some() {
                    self.try_next_target(engine, now, sender);
                }
            }
            Msg::Introduce => self.queue_intro(engine, now, sender, target, INTRO),
            Msg::Payload(text) | Msg::QueuedDelivery { payload: text } => {
                self.queue_intro(engine, now, sender, target, &text)
            }
            _ => {}
        }
    }

    fn timer(&mut self, engine: &mut Engine<Msg>, now: VirtualTime, at: NodeAddress, msg: Msg) {
        match msg {
            Msg::Directive(i) => {
                let d = self.scenario.directives[i].clone();
                self.directive(engine, now, &d);
            }
            Msg::IntroDeadline(id) => {
                if let Some(p) = self.intros.expire(id, now) {
                    self.log(now, "expired", &[p.sender, p.target], vec![]);
                }
            }
            Msg::CommitDeadline(id) => {
                let was = self.commits[id].state().is_resolved();
                self.commits[id].tick(now);
                if !was {
                    self.report_commit(now, id);
                }
            }
            Msg::BeaconTick { hood, epoch } => {
                let hd = &self.hoods[hood];
                if hd.epoch != epoch || hd.router != Some(at) || !self.is_up(at) {
                    return;
                }
                if let Some(w) = hd.watcher {
                    let delay = engine.hop_delay(at);
                    engine.schedule_in(delay, w, EventKind::Beacon { from: at });
                }
                let period = VirtualTime(self.params.beacon_period);
                engine.schedule(now + period, at, EventKind::Timer(Msg::BeaconTick { hood, epoch }));
            }
            Msg::MonitorTick { hood, epoch } => {
                let hd = &self.hoods[hood];
                if hd.epoch != epoch || hd.watcher != Some(at) {
                    return;
                }
                let expired = self.is_up(at) && hd.monitor.is_some_and(|m| m.expired(now));
                if !expired {
                    let period = VirtualTime(self.params.beacon_period);
                    engine.schedule(now + period, at, EventKind::Timer(Msg::MonitorTick { hood, epoch }));
                    return;
                }
                let old = hd.router.expect("watched router");
                self.log(now, "beacon-expired", &[at, old], vec![]);
                match next_in_line(&self.hoods[hood].map, &self.criteria(), old) {
                    Some(new) => {
                        self.hoods[hood].router = Some(new);
                        let domain = self.nodes[&new].domain.clone();
                        self.directory.advertise(new, &domain, true);
                        self.log_hood(now, "takeover", hood, &[new, old], vec![]);
                        self.start_beacons(engine, now, hood);
                    }
                    None => {
                        self.hoods[hood].router = None;
                        self.hoods[hood].watcher = None;
                        self.log_hood(now, "no-router", hood, &[], vec![]);
                    }
                }
            }
            _ => {}
        }
    }
}

fn parse_span(s: &str) -> Option<AddressRange> {
    let (a, b) = s.split_once('-')?;
    Some(AddressRange::new(a.parse().ok()?, b.parse().ok()?))
}

impl Handler<Msg> for World {
    fn handle(&mut self, event: SimEvent<Msg>, engine: &mut Engine<Msg>) {
        let now = event.at;
        match event.kind {
            EventKind::Deliver { from, msg } => self.deliver(engine, now, from, event.target, msg),
            EventKind::Timer(msg) => self.timer(engine, now, event.target, msg),
            EventKind::Beacon { from } => {
                let target = event.target;
                if !self.is_up(target) {
                    return;
                }
                if let Some(h) = self.nodes.get(&target).and_then(|n| n.hood) {
                    let hood = &mut self.hoods[h];
                    if hood.router == Some(from) && hood.watcher == Some(target) {
                        if let Some(m) = hood.monitor.as_mut() {
                            m.observe(now);
                        }
                    }
                }
            }
            EventKind::NodeUp | EventKind::NodeDown => {}
        }
    }
}
