//! Browser bindings for the `relspin` demo page.
//!
//! Every export returns plain numbers or `Result<_, String>`, so the same
//! functions run natively under `cargo test`.

use relspin::bell::{self, TwoParticleState};
use relspin::nalgebra::{Vector2, Vector3};
use relspin::num_complex::Complex64;
use relspin::spinops;
use relspin::OperatorKind;
use wasm_bindgen::prelude::wasm_bindgen;

fn kind_of(name: &str) -> Result<OperatorKind, String> {
    name.parse::<OperatorKind>().map_err(|e| e.to_string())
}

fn grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Positive eigenvalue of `a·S` as the axis turns from parallel to the
/// momentum (`θ = 0`) to antiparallel (`θ = π`). Momentum lies along z.
#[wasm_bindgen]
pub fn eigenvalue_curve(kind: &str, mass: f64, p_mag: f64, samples: usize) -> Result<Vec<f64>, String> {
    let kind = kind_of(kind)?;
    let p = Vector3::new(0.0, 0.0, p_mag);
    grid(0.0, std::f64::consts::PI, samples)
        .into_iter()
        .map(|t| {
            let axis = Vector3::new(t.sin(), 0.0, t.cos());
            spinops::spin_eigenvalues(kind, mass, &p, &axis)
                .map(|(_, plus)| plus)
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// Maximal CHSH value of a singlet whose two particles both move along z,
/// sampled at `steps` momenta in `[0, p_max]`.
#[wasm_bindgen]
pub fn chsh_curve(kind: &str, mass: f64, p_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    let kind = kind_of(kind)?;
    grid(0.0, p_max, steps)
        .into_iter()
        .map(|p| {
            let v = Vector3::new(0.0, 0.0, p);
            TwoParticleState::singlet(mass, v, v)
                .and_then(|s| bell::max_chsh_oracle(&s, kind))
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// Spin expectation `[x, y, z]` for the pure state with Bloch angles
/// `(polar, azimuth)` carried at momentum `p_mag` along z.
#[wasm_bindgen]
pub fn spin_vector(kind: &str, mass: f64, p_mag: f64, polar: f64, azimuth: f64) -> Result<Vec<f64>, String> {
    let kind = kind_of(kind)?;
    let psi = Vector2::new(
        Complex64::new((polar / 2.0).cos(), 0.0),
        Complex64::from_polar((polar / 2.0).sin(), azimuth),
    );
    let p = Vector3::new(0.0, 0.0, p_mag);
    spinops::spin_expectation(kind, &psi, mass, &p)
        .map(|s| s.iter().copied().collect())
        .map_err(|e| e.to_string())
}
