//! Named experiments, stored as config text so they go through the same
//! parser as user files.

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: &'static str,
}

pub const ALL: &[Preset] = &[
    Preset {
        name: "table-appendix-b",
        description: "l2/linf errors and orders at t = 0.05 for N = 25..200",
        config: "\
experiment = table-appendix-b
problem.t_end = 0.05
ic.kind = exact
ic.front = 0.2
run.grids = 25,50,100,200
run.schemes = arithmetic,integral,sam-jump
output.probes = 0.32
output.snapshots = 0.05
",
    },
    Preset {
        name: "fig-intro",
        description: "all four face treatments on the coarse grid dx = 0.04",
        config: "\
experiment = fig-intro
problem.t_end = 0.05
ic.kind = exact
run.grids = 25
run.schemes = arithmetic,harmonic,integral,sam-jump
output.probes = 0.32
output.snapshots = 0.05
",
    },
    Preset {
        name: "waiting-time",
        description: "piecewise-linear data whose support waits before moving, N = 100",
        config: "\
experiment = waiting-time
problem.t_end = 0.2
ic.kind = piecewise-linear
ic.x_knee = 0.5
run.grids = 100
run.schemes = arithmetic,harmonic,integral,sam-jump
scheme.stencil = two-cells-right
output.probes = 0.32,0.55
output.snapshots = 0,0.05,0.1,0.15,0.2
",
    },
    Preset {
        name: "sam-exact",
        description: "shock-based scheme driven by the exact front, N = 50 and 100",
        config: "\
experiment = sam-exact
problem.t_end = 0.05
ic.kind = exact
run.grids = 50,100
run.schemes = sam-exact
output.probes = 0.32
output.snapshots = 0,0.05
",
    },
    Preset {
        name: "sam-jump",
        description: "jump-condition and level-set trackers, N = 25..200",
        config: "\
experiment = sam-jump
problem.t_end = 0.05
ic.kind = exact
run.grids = 25,50,100,200
run.schemes = sam-jump,sam-levelset
output.probes = 0.32
output.snapshots = 0.05
",
    },
    Preset {
        name: "average-schemes",
        description: "arithmetic, harmonic and integral averages, N = 50 and 100",
        config: "\
experiment = average-schemes
problem.t_end = 0.05
ic.kind = exact
run.grids = 50,100
run.schemes = arithmetic,harmonic,integral
output.probes = 0.32
output.snapshots = 0.05
",
    },
    Preset {
        name: "harmonic-kmin",
        description: "harmonic average with k_min = 0: the front locks",
        config: "\
experiment = harmonic-kmin
problem.t_end = 0.05
problem.k_min = 0
ic.kind = exact
run.grids = 50,100
run.schemes = harmonic
output.probes = 0.32
output.snapshots = 0.05
",
    },
    Preset {
        name: "arith-dt",
        description: "arithmetic average at dt = dx^2/32 and dx^2/64, N = 50",
        config: "\
experiment = arith-dt
problem.t_end = 0.05
ic.kind = exact
run.grids = 50
run.schemes = arithmetic
scheme.dt_factor = 0.03125,0.015625
output.probes = 0.32,0.34
output.snapshots = 0.05
",
    },
    Preset {
        name: "integral-amr",
        description: "integral average with and without a 10x moving window, N = 100",
        config: "\
experiment = integral-amr
problem.t_end = 0.07
ic.kind = exact
run.grids = 100
run.schemes = integral
amr.n_inner = 0,10
output.probes = 0.32
output.snapshots = 0.05
",
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    ALL.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_self_referencing() {
        for (k, p) in ALL.iter().enumerate() {
            assert!(ALL[k + 1..].iter().all(|q| q.name != p.name));
            assert!(p.config.starts_with(&format!("experiment = {}\n", p.name)));
        }
        assert!(find("fig-intro").is_some());
        assert!(find("fig-outro").is_none());
    }
}
