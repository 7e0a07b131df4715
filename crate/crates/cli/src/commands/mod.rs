mod analytic;
mod arith;
mod chains;
mod gamma;
mod mahler;
mod measures;
mod zeta;

use crate::registry::Registry;

/// Every subcommand, in help order.
pub fn registry() -> Registry {
    let mut r = Registry::default();
    r.register(arith::Bernoulli);
    r.register(arith::ZetaNeg);
    r.register(arith::Padic);
    r.register(arith::Teichmuller);
    r.register(mahler::MahlerCoeffs);
    r.register(mahler::MahlerEval);
    r.register(mahler::DecayCheck);
    r.register(gamma::GammaP);
    r.register(gamma::GammaContinuity);
    r.register(gamma::SpqSweep);
    r.register(zeta::KlBranch);
    r.register(zeta::DoubleBranchCmd);
    r.register(zeta::Kummer);
    r.register(measures::Moments);
    r.register(measures::OpenSet);
    r.register(zeta::UniversalPowerCmd);
    r.register(zeta::PqHurwitzCmd);
    r.register(chains::ChainPropagate::default());
    r.register(chains::ChainLimits);
    r.register(chains::Heisenberg);
    r.register(chains::HahnBasis);
    r.register(chains::QZetaCmd);
    r.register(analytic::ThetaCheck);
    r.register(analytic::LambdaCheck);
    r.register(analytic::Weil);
    r
}
