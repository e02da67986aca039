//! Worst condition numbers of the normal matrices for the constant-coefficient case.
use qtrefftz::exact::CaseId;
use qtrefftz::experiment::{cmd_conditioning, RunConfig};

fn main() {
    let mut cfg = RunConfig::desk(CaseId::Tc1);
    cfg.n_range = (1..=8).collect();
    print!("{}", cmd_conditioning(&cfg).unwrap().to_pretty());
}
