use super::{case_rng, SuiteReport};
use crate::build::{compile_half_rgs, execute_schedule, resource_report, BranchingVector, Outcomes};
use crate::decoder::{run_bsm, Arrival};
use crate::stab::{Gate, Tableau};

pub const FREQUENCY_TOLERANCE: f64 = 0.03;

fn within(name: &str, hits: usize, total: usize) -> (Result<(), String>, String) {
    let f = hits as f64 / total as f64;
    let note = format!("{name} {f:.4} over {total}");
    if (f - 0.5).abs() <= FREQUENCY_TOLERANCE {
        (Ok(()), note)
    } else {
        (Err(format!("{name} frequency {f:.4} outside 0.5 ± {FREQUENCY_TOLERANCE}")), note)
    }
}

/// Z-tag frequency over tag-bearing photon emissions, and Bell-measurement
/// success frequency over ideal pairs at `p_success = 0.5`.
pub fn statistics(samples: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("statistics");
    let b: BranchingVector = "2,3".parse().expect("valid branching");
    let (layout, sched) = compile_half_rgs(1, &b, 0).expect("valid layout");
    let tagged = layout.tag_bearing_photons();
    let (mut hits, mut total, mut run) = (0, 0, 0u64);
    while total < samples {
        let mut rng = case_rng(seed, run);
        run += 1;
        let mut t = Tableau::new(layout.end()).expect("small tableau");
        let rec = execute_schedule(&layout, &sched, &mut t, Outcomes::Random(&mut rng)).expect("layout fits");
        hits += tagged.iter().filter(|&&p| rec.photon(p)).count();
        total += tagged.len();
    }
    let (res, note) = within("z-tag", hits, total);
    report.record(res);
    report.notes.push(note);

    let mut rng = case_rng(seed, u64::MAX);
    let mut ok = 0;
    for _ in 0..samples {
        let mut t = Tableau::new(2).expect("small tableau");
        t.apply_all([Gate::H(0), Gate::H(1), Gate::Cz(0, 1)]).expect("in range");
        let (a, b) = (Arrival { qubit: 0, lost: false }, Arrival { qubit: 1, lost: false });
        ok += run_bsm(0, a, b, &mut t, &mut rng, 0.5).expect("live photons").is_success() as usize;
    }
    let (res, note) = within("bsm-success", ok, samples);
    report.record(res);
    report.notes.push(note);
    report
}

/// Exact resource counts: the headline comparison plus agreement of the
/// closed forms with compiled layouts over a sweep.
pub fn resources() -> SuiteReport {
    let mut report = SuiteReport::new("resources");
    let r = resource_report(15, &"2,3".parse().expect("valid branching"), 10);
    let headline = [("prior_art_reserve", r.prior_art_reserve, 150), ("proposed_total", r.proposed_total, 13)];
    for (name, got, want) in headline {
        report.record(if got == want { Ok(()) } else { Err(format!("m=15 b=(2,3) r=10: {name}={got}, expected {want}")) });
    }
    report.notes.push(format!("m=15 b=(2,3) r=10: prior-art reserve {}, proposed total {}", r.prior_art_reserve, r.proposed_total));
    for m in 1..=4 {
        for b in ["1", "2", "3", "2,2", "2,3", "3,2", "1,1,1", "2,2,2"] {
            let bv: BranchingVector = b.parse().expect("valid branching");
            let (layout, _) = compile_half_rgs(m, &bv, 0).expect("valid layout");
            let rr = resource_report(m, &bv, 10);
            let checks = [
                ("photons_per_arm", rr.photons_per_arm, layout.arms[0].photons().count()),
                ("photons_per_half", rr.photons_per_half, layout.photons().len()),
                ("photons_per_rgs", rr.photons_per_rgs, 2 * layout.photons().len()),
                ("emitter_line", rr.emitter_line, layout.emitters.len()),
                ("proposed_emitters", rr.proposed_emitters, layout.emitters.len() - 1),
                ("proposed_total", rr.proposed_total, 10 + layout.emitters.len() - 1),
                ("prior_art_reserve", rr.prior_art_reserve, 10 * m),
            ];
            for (name, got, want) in checks {
                report.record(if got == want { Ok(()) } else { Err(format!("m={m} b=({b}): {name}={got}, layout gives {want}")) });
            }
        }
    }
    report
}
