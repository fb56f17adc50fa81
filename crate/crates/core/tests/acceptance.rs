//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::{Duration, Instant};

use flipgraph::explorer::DEFAULT_BUDGET;
use flipgraph::par::Exec;
use flipgraph::surface::Triangulation;
use flipgraph::sweep::{self, AxiomReport, SweepReport};
use flipgraph::Result;

const SEED: u64 = 20_260_101;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(n: u32, title: &str, limit: Duration, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(o) => (o.pass && elapsed <= limit, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let timing = format!("{:.2}s of {}s", elapsed.as_secs_f64(), limit.as_secs());
    println!(
        "criterion {n} {}: {title} [{timing}] {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn reports(rs: &[&SweepReport]) -> Outcome {
    Outcome {
        pass: rs.iter().all(|r| r.ok()),
        detail: rs
            .iter()
            .map(|r| r.summary())
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn axiom_sweep() -> Result<AxiomReport> {
    let mut total = sweep::disc_axioms(4, Exec::Parallel)?;
    for c in 5..=8 {
        total.absorb(sweep::disc_axioms(c, Exec::Parallel)?);
    }
    for (p, q) in [(1, 1), (2, 2)] {
        total.absorb(sweep::ball_axioms(
            Triangulation::annulus(p, q)?,
            5,
            Exec::Parallel,
        )?);
    }
    Ok(total)
}

fn main() {
    let mut all = true;
    let secs = Duration::from_secs;

    all &= run(1, "arc-count formula", secs(1), || {
        let r = sweep::arc_count_sweep()?;
        Ok(reports(&[&r]))
    });

    all &= run(2, "associahedron reconstruction c=4..9", secs(30), || {
        let mut total = SweepReport::new("associahedra");
        for c in 4..=9 {
            total.absorb(sweep::associahedron_check(c, Exec::Parallel)?);
        }
        Ok(reports(&[&total]))
    });

    // criteria 3 and 4 share one sweep
    let start = Instant::now();
    let axioms = axiom_sweep();
    let axiom_time = start.elapsed();
    all &= run(3, "projection axioms p1-p4", secs(300), || {
        let a = axioms.clone()?;
        let mut o = reports(&[&a.p1, &a.p2, &a.p3, &a.p4]);
        o.pass &= axiom_time <= secs(300);
        o.detail = format!(
            "{} projections, {} edges, sweep took {:.2}s; {}",
            a.projections,
            a.edges,
            axiom_time.as_secs_f64(),
            o.detail
        );
        Ok(o)
    });
    all &= run(4, "measure decrease and watchdog", secs(1), || {
        let a = axioms.clone()?;
        Ok(reports(&[&a.measure]))
    });

    all &= run(5, "disc oracle equivalence c=4..9", secs(120), || {
        let mut total = SweepReport::new("project vs dragging");
        for c in 4..=9 {
            total.absorb(sweep::disc_oracle_equivalence(c, Exec::Parallel)?);
        }
        Ok(reports(&[&total]))
    });

    all &= run(
        6,
        "non-leaving-face, discs c=5..9, all pairs",
        secs(600),
        || {
            let mut nlf = SweepReport::new("nlf");
            let mut spot = SweepReport::new("spot checks");
            let mut pairs = 0;
            for c in 5..=9 {
                let s = sweep::disc_nlf(c, Exec::Parallel, SEED)?;
                pairs += s.pairs;
                nlf.absorb(s.nlf);
                spot.absorb(s.spot_check);
            }
            let mut o = reports(&[&nlf, &spot]);
            o.detail = format!("{pairs} pairs, seed {SEED}; {}", o.detail);
            Ok(o)
        },
    );

    all &= run(
        7,
        "non-leaving-face, radius-6 balls, distance <= 6",
        secs(600),
        || {
            let mut nlf = SweepReport::new("nlf");
            let mut spot = SweepReport::new("spot checks");
            let mut detail = Vec::new();
            for (name, t) in [
                ("annulus(1,1)", Triangulation::annulus(1, 1)?),
                ("annulus(2,2)", Triangulation::annulus(2, 2)?),
                ("torus-one-boundary", Triangulation::torus_one_boundary()?),
            ] {
                let s = sweep::bounded_nlf(t, 6, 6, DEFAULT_BUDGET, Exec::Parallel, SEED)?;
                detail.push(format!("{name} {} pairs", s.pairs));
                nlf.absorb(s.nlf);
                spot.absorb(s.spot_check);
            }
            let mut o = reports(&[&nlf, &spot]);
            o.detail = format!("{}, seed {SEED}; {}", detail.join(", "), o.detail);
            Ok(o)
        },
    );

    all &= run(
        8,
        "transport round trips and code path independence",
        secs(60),
        || {
            let hex = sweep::round_trip_sweep(Triangulation::disc(6)?, 4, Exec::Parallel)?;
            let ann = sweep::round_trip_sweep(Triangulation::annulus(2, 2)?, 3, Exec::Parallel)?;
            Ok(reports(&[&hex, &ann]))
        },
    );

    if !all {
        std::process::exit(1);
    }
}
