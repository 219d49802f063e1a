//! Compiled-in experiment presets.

use annulus_core::{DomainSpec, Nonlinearity};

use crate::config::{ExperimentConfig, Tolerances};
use crate::sweep::InstabilityParams;

pub const PRESET_NAMES: [&str; 3] = ["example1", "example2", "instability"];

/// The two canonical run presets: the petal-ellipse domain and the
/// eccentric circle annulus, both with f = 1 at n = 192.
pub fn run_preset(name: &str) -> Option<ExperimentConfig> {
    let domain = match name {
        "example1" => DomainSpec::PetalEllipse {
            a_in: 1.0,
            b1: 6.0,
            b2: 4.0,
        },
        "example2" => DomainSpec::EccentricAnnulus {
            a: 0.3,
            r: 0.2,
            big_r: 0.8,
        },
        _ => return None,
    };
    Some(ExperimentConfig {
        domain,
        nonlinearity: Nonlinearity::Constant { c: 1.0 },
        n: 192,
        tolerances: Tolerances::default(),
        checks: None,
        out_dir: None,
    })
}

pub fn instability_preset() -> InstabilityParams {
    InstabilityParams {
        r0: 0.2,
        big_r0: 0.8,
        offsets: vec![0.0, 0.02, 0.05, 0.1, 0.3],
        nonlinearity: Nonlinearity::Constant { c: 1.0 },
        n: 192,
    }
}
