use crate::error::{Error, Result};
use crate::machine::{out_t, MachineConfig};
use crate::perm::Permutation;

/// `σ` with its first two entries interchanged.
pub fn hat(sigma: &Permutation) -> Result<Permutation> {
    if sigma.len() < 2 {
        return Err(Error::Precondition(format!(
            "hat needs length at least 2, got {sigma}"
        )));
    }
    let mut values = sigma.values().to_vec();
    values.swap(0, 1);
    Ok(Permutation::from_vec_unchecked(values))
}

/// The `(σ, σ̂)` machine.
pub fn hat_machine(sigma: &Permutation) -> Result<MachineConfig> {
    MachineConfig::new([sigma.clone(), hat(sigma)?])
}

/// `(out^{σ,σ̂}(pʳ))ʳ`, the inverse of `out^{σ,σ̂}`.
pub fn inverse_out_hat(p: &Permutation, sigma: &Permutation) -> Result<Permutation> {
    let machine = hat_machine(sigma)?;
    Ok(out_t(&p.reverse(), &machine).reverse())
}
