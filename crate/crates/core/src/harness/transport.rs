//! Synchronous in-memory links between the CA and the two parties.

use std::collections::VecDeque;
use std::fmt;

use crate::protocol::Step;

/// A CA-to-party link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    CaToInitiator,
    CaToResponder,
}

impl Link {
    pub fn for_step(step: Step) -> Self {
        if step.to_initiator() {
            Link::CaToInitiator
        } else {
            Link::CaToResponder
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Link::CaToInitiator => "CA->A",
            Link::CaToResponder => "CA->B",
        })
    }
}

/// Which links a passive eavesdropper listens on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TapSet {
    pub initiator: bool,
    pub responder: bool,
}

impl TapSet {
    pub const NONE: TapSet = TapSet {
        initiator: false,
        responder: false,
    };
    pub const BOTH: TapSet = TapSet {
        initiator: true,
        responder: true,
    };

    pub fn covers(&self, link: Link) -> bool {
        match link {
            Link::CaToInitiator => self.initiator,
            Link::CaToResponder => self.responder,
        }
    }
}

/// Observes and optionally rewrites frames in transit.
pub trait LinkHook {
    fn on_frame(&mut self, link: Link, frame: &mut Vec<u8>);
}

/// Frame-level transport contract. A socket-backed implementation would
/// provide the same two calls.
pub trait Transport {
    fn send(&mut self, link: Link, frame: Vec<u8>);
    fn recv(&mut self, link: Link) -> Option<Vec<u8>>;
}

/// Two FIFO queues with hooks run on every send, in registration order.
#[derive(Default)]
pub struct MemoryTransport {
    to_initiator: VecDeque<Vec<u8>>,
    to_responder: VecDeque<Vec<u8>>,
    hooks: Vec<Box<dyn LinkHook>>,
}

impl MemoryTransport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_hook(mut self, hook: impl LinkHook + 'static) -> Self {
        self.hooks.push(Box::new(hook));
        self
    }

    fn queue(&mut self, link: Link) -> &mut VecDeque<Vec<u8>> {
        match link {
            Link::CaToInitiator => &mut self.to_initiator,
            Link::CaToResponder => &mut self.to_responder,
        }
    }
}

impl Transport for MemoryTransport {
    fn send(&mut self, link: Link, mut frame: Vec<u8>) {
        for hook in &mut self.hooks {
            hook.on_frame(link, &mut frame);
        }
        self.queue(link).push_back(frame);
    }

    fn recv(&mut self, link: Link) -> Option<Vec<u8>> {
        self.queue(link).pop_front()
    }
}
