//! Benchmark environments.

mod bandit;
mod layered;
mod life;
mod sysadmin;

pub use bandit::GaussianBandit;
pub use layered::{LayeredGaussian, LayeredGaussianSpec, LayeredState};
pub use life::{GameOfLife, LifeState, DEFAULT_RULE_FIDELITY};
pub use sysadmin::{SysAdmin, SysAdminState, DEFAULT_REBOOT_COST};

pub const DEFAULT_HORIZON: usize = 50;

pub(crate) fn gaussian(mean: f64, std: f64, rng: &mut crate::rng::SimRng) -> f64 {
    use rand::Rng;
    if std == 0.0 {
        return mean;
    }
    let z: f64 = rng.sample(rand_distr::StandardNormal);
    mean + std * z
}
