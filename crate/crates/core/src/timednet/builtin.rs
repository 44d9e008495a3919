use crate::fott::Interval;

use super::{BinOp, Expr, NetError, NetTransition, Process, TimedNet};

/// The most general system over events `a`, `b`: either may happen at any
/// time, and each sets `x` so that a silent `z` must follow before the next
/// tick.
fn universal(net: &mut TimedNet) {
    net.var("x", 0, 2, 0);
    net.process(
        Process::new("Universal", "u")
            .with(NetTransition::on("u", "a", "u").assign("x", Expr::int(1)))
            .with(NetTransition::on("u", "b", "u").assign("x", Expr::int(2)))
            .with(
                NetTransition::on("u", "z", "u")
                    .when(Expr::bin(BinOp::Ne, Expr::var("x"), Expr::int(0)))
                    .assign("x", Expr::int(0))
                    .urgent(),
            ),
    );
}

/// Universal system composed with the observer for "`a` occurs after the
/// first `b` within `[d1, d2[`". The observer starts on the first `b`,
/// waits `d1`, then watches for an `a` during `d2 - d1` units; past that,
/// `error` becomes enabled (but is never forced).
pub fn builtin_present(d1: u64, d2: u64) -> Result<TimedNet, NetError> {
    if d1 >= d2 {
        return Err(NetError::BadWindow { d1, d2 });
    }
    let mut net = TimedNet::default();
    universal(&mut net);
    net.process(
        Process::new("Present", "idle")
            .with(NetTransition::probe(
                "idle",
                "b",
                Interval::at_least(0),
                "start",
                "start",
            ))
            .with(
                NetTransition::elapse("start", Interval::closed(d1, d1), "watch", "watch").urgent(),
            )
            .with(NetTransition::probe(
                "watch",
                "a",
                Interval::closed_open(0, d2 - d1),
                "stop",
                "ok",
            ))
            .with(NetTransition::elapse(
                "watch",
                Interval::at_least(d2 - d1),
                "error",
                "error",
            )),
    );
    // The observer must reach `watch` before the system moves on at the
    // instant the window opens.
    for low in ["a", "b", "z"] {
        net.priority("watch", low);
    }
    Ok(net)
}

/// Mouse button emitting `double` or `single` one time unit after a first
/// click, observed by `neverTwice`, which fails on a second click.
pub fn builtin_mouse() -> TimedNet {
    let mut net = TimedNet::default();
    net.var("dbl", 0, 1, 0);
    net.process(
        Process::new("Push", "s0")
            .with(NetTransition::on("s0", "click", "s1").assign("dbl", Expr::int(0)))
            .with(
                NetTransition::on("s1", "click", "s1")
                    .assign("dbl", Expr::int(1))
                    .keepclock(),
            )
            .with(NetTransition::elapse("s1", Interval::closed(1, 1), "delay", "s2").urgent())
            .with(NetTransition::on("s2", "double", "s0").when(Expr::var("dbl")))
            .with(NetTransition::on("s2", "single", "s0").when(Expr::not(Expr::var("dbl")))),
    );
    net.process(
        Process::new("neverTwice", "s0")
            .with(NetTransition::probe(
                "s0",
                "click",
                Interval::at_least(0),
                "once",
                "s1",
            ))
            .with(NetTransition::probe(
                "s1",
                "click",
                Interval::at_least(0),
                "error",
                "error",
            )),
    );
    net.priority("delay", "click");
    net
}

/// Universal system with an observer that, once `b` occurs, loops on an
/// urgent zero-delay transition and so stops time.
pub fn builtin_zeno() -> TimedNet {
    let mut net = TimedNet::default();
    universal(&mut net);
    net.process(
        Process::new("Spin", "idle")
            .with(NetTransition::probe(
                "idle",
                "b",
                Interval::at_least(0),
                "start",
                "spin",
            ))
            .with(NetTransition::elapse("spin", Interval::closed(0, 0), "spin", "spin").urgent()),
    );
    net
}
