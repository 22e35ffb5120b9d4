//! Built-in closed-form test problems.
//!
//! * `hier1`: `X_cat ∈ {a, b}`, `X_cont ∈ [-5, 5]` active only when
//!   `X_cat = b`; `f = 1` for `a`, `f = (X_cont / 5)²` for `b`.
//! * `sphere`: two continuous and one integer variable in `[-5, 5]` plus three
//!   categoricals (cardinalities 3, 2, 4). Quadratic bowl around a shift
//!   vector plus an additive offset per category.
//! * `rugged`: the `sphere` space and bowl plus a Rastrigin-style cosine term
//!   `10 · Σ (1 − cos 2π(x − s))` over the numeric variables.
//!
//! `sphere` and `rugged` come in instances: `sphere@7` uses a shift vector
//! and category offsets derived from the instance number. Instance 0 (also
//! reachable as plain `sphere`) is unshifted.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng as _;

use crate::rng;
use crate::space::{Level, Problem, SearchSpace, Value, VariableSpec};

pub const BUILTIN_NAMES: [&str; 3] = ["hier1", "sphere", "rugged"];

const RUGGED_AMPLITUDE: f64 = 10.0;
const LABELS: [&str; 4] = ["a", "b", "c", "d"];

pub fn hier1() -> Problem {
    let space = SearchSpace::new(
        "hier1",
        vec![
            VariableSpec::categorical("X_cat", &["a", "b"]),
            VariableSpec::continuous("X_cont", -5.0, 5.0).when("X_cat", vec![Level::Label("b".into())]),
        ],
    );
    Problem::new(space, |a| match (&a[0], &a[1]) {
        (Value::Cat(c), Value::Real(x)) if c == "b" => (x / 5.0) * (x / 5.0),
        _ => 1.0,
    })
    .expect("hier1 space is valid")
}

fn mixed_space(name: String) -> SearchSpace {
    SearchSpace::new(
        &name,
        vec![
            VariableSpec::continuous("x0", -5.0, 5.0),
            VariableSpec::continuous("x1", -5.0, 5.0),
            VariableSpec::integer("k0", -5, 5),
            VariableSpec::categorical("c0", &LABELS[..3]),
            VariableSpec::categorical("c1", &LABELS[..2]),
            VariableSpec::categorical("c2", &LABELS),
        ],
    )
}

/// Instance parameters shared by the sphere and rugged families.
#[derive(Debug, Clone)]
struct MixedParams {
    shift: [f64; 3],
    offsets: [Vec<f64>; 3],
}

impl MixedParams {
    fn for_instance(instance: u64) -> Self {
        let base = [vec![0.0, 1.0, 2.0], vec![0.0, 0.5], vec![0.0, 1.5, 3.0, 4.5]];
        if instance == 0 {
            return Self { shift: [0.0; 3], offsets: base };
        }
        let mut r = rng::rng(rng::derive(instance, 0x5EED));
        let shift = [r.gen_range(-2.0..=2.0), r.gen_range(-2.0..=2.0), f64::from(r.gen_range(-2i32..=2))];
        let offsets = base.map(|o| {
            let rot = r.gen_range(0..o.len());
            let mut o = o;
            o.rotate_left(rot);
            o
        });
        Self { shift, offsets }
    }

    fn bowl(&self, a: &[Value]) -> (f64, [f64; 3]) {
        let mut d = [0.0; 3];
        let mut f = 0.0;
        for (i, di) in d.iter_mut().enumerate() {
            *di = a[i].as_f64().unwrap_or(0.0) - self.shift[i];
            f += *di * *di;
        }
        for (j, offsets) in self.offsets.iter().enumerate() {
            let label = a[3 + j].as_label().unwrap_or(LABELS[0]);
            let idx = LABELS.iter().position(|l| *l == label).unwrap_or(0);
            f += offsets[idx];
        }
        (f, d)
    }
}

pub fn sphere_instance(instance: u64) -> Problem {
    let name = instance_name("sphere", instance);
    let params = MixedParams::for_instance(instance);
    Problem::new(mixed_space(name), move |a| params.bowl(a).0).expect("sphere space is valid")
}

pub fn rugged_instance(instance: u64) -> Problem {
    let name = instance_name("rugged", instance);
    let params = MixedParams::for_instance(instance);
    Problem::new(mixed_space(name), move |a| {
        let (f, d) = params.bowl(a);
        f + RUGGED_AMPLITUDE * d.iter().map(|di| 1.0 - libm::cos(2.0 * PI * di)).sum::<f64>()
    })
    .expect("rugged space is valid")
}

fn instance_name(family: &str, instance: u64) -> String {
    if instance == 0 {
        String::from(family)
    } else {
        format!("{family}@{instance}")
    }
}

/// Looks up a built-in problem by `name` or `name@instance`.
pub fn builtin(spec: &str) -> Option<Problem> {
    let (family, instance) = match spec.split_once('@') {
        Some((f, i)) => (f, i.parse::<u64>().ok()?),
        None => (spec, 0),
    };
    match family {
        "hier1" if instance == 0 => Some(hier1()),
        "sphere" => Some(sphere_instance(instance)),
        "rugged" => Some(rugged_instance(instance)),
        _ => None,
    }
}
