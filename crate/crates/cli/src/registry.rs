//! Named formulas reachable from `eval` and `table`.

use slit_core::conditioned::{
    conditioned_density, conditioned_density_doob, free_density, killed_density_2d, killed_survival,
};
use slit_core::green::{
    green_lambda_axis, green_lambda_general, green_lambda_offaxis, green_log_axis, green_log_axis_printed,
    greenfact, killed_density_axis, killed_density_offaxis, potential_lambda, resolvent_density,
};
use slit_core::hyperbolic::{
    drift_joint_density, exp_functional_mean, hyp_exit_joint, hyp_exit_joint_matched, hyp_exit_place,
};
use slit_core::slit::{
    conditional_gauge, hit_place_cdf, hit_place_cdf_axis, hit_place_density, hit_place_density_axis,
    hit_place_density_interval, joint_density_axis, joint_density_general, level_hit_density,
};
use slit_core::specfun::{bessel_i, bessel_k};
use slit_core::stable::{rel_cauchy_density, rel_potential, subordinator_density, RelParams};
use slit_core::{Convention, Point, QuadSpec, Result};

type Eval = fn(&[f64], &QuadSpec) -> Result<f64>;

pub struct Formula {
    pub name: &'static str,
    /// Library function behind the name, echoed as provenance.
    pub function: &'static str,
    /// `None` for formulas that do not involve a Brownian normalization.
    pub convention: Option<Convention>,
    pub params: &'static [&'static str],
    pub eval: Eval,
}

impl Formula {
    pub fn tag(&self) -> &'static str {
        self.convention.map_or("n/a", Convention::tag)
    }
}

const V2: Option<Convention> = Some(Convention::Var2T);
const V1: Option<Convention> = Some(Convention::Var1T);

fn pt(a: f64, b: f64) -> Point {
    Point::new(a, b)
}

fn dimension(d: f64) -> Result<usize> {
    if d.fract() == 0.0 && d >= 1.0 {
        Ok(d as usize)
    } else {
        Err(slit_core::Error::Domain(format!("dimension must be a positive integer, got {d}")))
    }
}

pub static FORMULAS: &[Formula] = &[
    Formula { name: "h1", function: "hit_place_density_axis", convention: V2, params: &["x", "z"], eval: |v, _| hit_place_density_axis(v[0], v[1]) },
    Formula { name: "hit_cdf_axis", function: "hit_place_cdf_axis", convention: V2, params: &["x", "z0"], eval: |v, _| hit_place_cdf_axis(v[0], v[1]) },
    Formula { name: "hit_density", function: "hit_place_density", convention: V2, params: &["x1", "x2", "z"], eval: |v, _| hit_place_density(pt(v[0], v[1]), v[2]) },
    Formula { name: "hit_cdf", function: "hit_place_cdf", convention: V2, params: &["x1", "x2", "z0"], eval: |v, _| hit_place_cdf(pt(v[0], v[1]), v[2]) },
    Formula { name: "hit_interval", function: "hit_place_density_interval", convention: V2, params: &["x", "z"], eval: |v, _| hit_place_density_interval(v[0], v[1]) },
    Formula { name: "joint_axis", function: "joint_density_axis", convention: V2, params: &["x", "s", "z"], eval: |v, _| joint_density_axis(v[0], v[1], v[2]) },
    Formula { name: "joint_general", function: "joint_density_general", convention: V1, params: &["x1", "x2", "s", "w"], eval: |v, _| joint_density_general(pt(v[0], v[1]), v[2], v[3]) },
    Formula { name: "level_hit", function: "level_hit_density", convention: V2, params: &["a", "s"], eval: |v, _| level_hit_density(v[0], v[1]) },
    Formula { name: "gauge", function: "conditional_gauge", convention: V1, params: &["x1", "x2", "w", "lambda"], eval: |v, q| conditional_gauge(pt(v[0], v[1]), v[2], v[3], q) },
    Formula { name: "bessel_k", function: "bessel_k", convention: None, params: &["nu", "z"], eval: |v, _| bessel_k(v[0], v[1]) },
    Formula { name: "bessel_i", function: "bessel_i", convention: None, params: &["nu", "z"], eval: |v, _| bessel_i(v[0], v[1]) },
    Formula { name: "subordinator", function: "subordinator_density", convention: V2, params: &["t", "u"], eval: |v, _| subordinator_density(v[0], v[1]) },
    Formula { name: "rel_cauchy", function: "rel_cauchy_density", convention: None, params: &["m", "t", "x"], eval: |v, _| rel_cauchy_density(&RelParams::new(1, v[0], v[1])?, &[v[2]]) },
    Formula { name: "rel_potential", function: "rel_potential", convention: None, params: &["d", "alpha", "m", "r"], eval: |v, _| rel_potential(dimension(v[0])?, v[1], v[2], v[3]) },
    Formula { name: "potential_lambda", function: "potential_lambda", convention: V2, params: &["lambda", "r"], eval: |v, _| potential_lambda(v[0], v[1]) },
    Formula { name: "resolvent", function: "resolvent_density", convention: V2, params: &["rate", "r"], eval: |v, _| resolvent_density(v[0], v[1], Convention::Var2T) },
    Formula { name: "resolvent_var1t", function: "resolvent_density", convention: V1, params: &["rate", "r"], eval: |v, _| resolvent_density(v[0], v[1], Convention::Var1T) },
    Formula { name: "green_axis", function: "green_lambda_axis", convention: V1, params: &["lambda", "x", "y"], eval: |v, q| green_lambda_axis(v[0], v[1], v[2], q) },
    Formula { name: "green_offaxis", function: "green_lambda_offaxis", convention: V1, params: &["lambda", "x1", "x2", "y"], eval: |v, q| green_lambda_offaxis(v[0], pt(v[1], v[2]), v[3], q) },
    Formula { name: "green_general", function: "green_lambda_general", convention: V1, params: &["lambda", "x1", "x2", "y1", "y2"], eval: |v, q| green_lambda_general(v[0], pt(v[1], v[2]), pt(v[3], v[4]), q) },
    Formula { name: "green_log_axis", function: "green_log_axis", convention: V1, params: &["y", "x1", "x2"], eval: |v, q| green_log_axis(v[0], pt(v[1], v[2]), q) },
    Formula { name: "green_log_axis_printed", function: "green_log_axis_printed", convention: V1, params: &["y", "x1", "x2"], eval: |v, q| green_log_axis_printed(v[0], pt(v[1], v[2]), q) },
    Formula { name: "greenfact", function: "greenfact", convention: V1, params: &["x1", "x2", "y"], eval: |v, q| greenfact(pt(v[0], v[1]), v[2], q) },
    Formula { name: "killed_axis", function: "killed_density_axis", convention: V1, params: &["t", "x", "y"], eval: |v, _| killed_density_axis(v[0], v[1], v[2]) },
    Formula { name: "killed_offaxis", function: "killed_density_offaxis", convention: V1, params: &["t", "x1", "x2", "y"], eval: |v, q| killed_density_offaxis(v[0], pt(v[1], v[2]), v[3], q) },
    Formula { name: "free", function: "free_density", convention: V2, params: &["t", "u1", "u2", "v1", "v2"], eval: |v, _| free_density(v[0], pt(v[1], v[2]), pt(v[3], v[4])) },
    Formula { name: "killed_2d", function: "killed_density_2d", convention: V2, params: &["t", "x1", "x2", "w1", "w2"], eval: |v, q| killed_density_2d(v[0], pt(v[1], v[2]), pt(v[3], v[4]), q) },
    Formula { name: "survival", function: "killed_survival", convention: V2, params: &["t", "x1", "x2"], eval: |v, q| killed_survival(v[0], pt(v[1], v[2]), q) },
    Formula { name: "conditioned", function: "conditioned_density", convention: V2, params: &["t", "y", "z", "w1", "w2"], eval: |v, q| conditioned_density(v[0], v[1], v[2], pt(v[3], v[4]), q) },
    Formula { name: "conditioned_doob", function: "conditioned_density_doob", convention: V2, params: &["t", "y", "z", "w1", "w2"], eval: |v, q| conditioned_density_doob(v[0], v[1], v[2], pt(v[3], v[4]), q) },
    Formula { name: "drift_joint", function: "drift_joint_density", convention: V2, params: &["mu", "y", "s", "z"], eval: |v, _| drift_joint_density(v[0], v[1], v[2], v[3]) },
    Formula { name: "hyp_exit_place", function: "hyp_exit_place", convention: V2, params: &["a", "y", "z"], eval: |v, _| hyp_exit_place(v[0], v[1], v[2]) },
    Formula { name: "hyp_exit_joint", function: "hyp_exit_joint", convention: V2, params: &["mu", "a", "y", "s", "z"], eval: |v, _| hyp_exit_joint(v[0], v[1], v[2], v[3], v[4]) },
    Formula { name: "hyp_exit_joint_matched", function: "hyp_exit_joint_matched", convention: V2, params: &["mu", "a", "y", "s", "z"], eval: |v, _| hyp_exit_joint_matched(v[0], v[1], v[2], v[3], v[4]) },
    Formula { name: "exp_functional_mean", function: "exp_functional_mean", convention: V2, params: &["mu", "y", "t"], eval: |v, _| exp_functional_mean(v[0], v[1], v[2]) },
];

pub fn lookup(name: &str) -> Option<&'static Formula> {
    FORMULAS.iter().find(|f| f.name == name)
}

pub fn names() -> Vec<&'static str> {
    FORMULAS.iter().map(|f| f.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut n = names();
        n.sort();
        n.dedup();
        assert_eq!(n.len(), FORMULAS.len());
    }

    #[test]
    fn every_formula_evaluates_somewhere() {
        let q = QuadSpec::default().with_rel_tol(1e-8);
        for f in FORMULAS {
            let args: Vec<f64> = f
                .params
                .iter()
                .map(|p| match *p {
                    "z" | "w" => -1.0,
                    "z0" | "s" | "t" | "lambda" | "rate" | "r" | "u" | "m" | "mu" | "nu" | "alpha" => 0.5,
                    "d" => 1.0,
                    "a" => 2.0,
                    "y" | "y1" => 3.0,
                    "x2" | "y2" | "u2" | "w2" | "v2" => 0.5,
                    _ => 1.0,
                })
                .collect();
            let args = match f.name {
                // levels 0 < z < a < y
                "hyp_exit_place" => vec![2.0, 3.0, 1.0],
                "hyp_exit_joint" | "hyp_exit_joint_matched" => vec![0.5, 2.0, 3.0, 0.5, 1.0],
                "drift_joint" => vec![0.5, 1.0, 0.5, -1.0],
                "conditioned" | "conditioned_doob" => vec![0.5, 1.0, -1.0, 0.5, 0.5],
                "exp_functional_mean" => vec![2.0, 1.0, 1.0],
                "hit_interval" => vec![0.3, 2.0],
                "bessel_k" | "bessel_i" => vec![0.5, 1.0],
                "rel_potential" => vec![3.0, 1.0, 1.0, 1.0],
                _ => args,
            };
            let v = (f.eval)(&args, &q).unwrap_or_else(|e| panic!("{}: {e}", f.name));
            assert!(v.is_finite(), "{}", f.name);
        }
    }
}
