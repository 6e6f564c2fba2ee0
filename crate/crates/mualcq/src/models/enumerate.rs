//! Exhaustive enumeration of interpretations over a signature.
//!
//! Bit layout (little-endian over one big counter): first the concept
//! extensions, one block of `size` bits per concept in sorted name order, bit
//! d of a block meaning element d+1 is in the extension; then the role
//! extensions, one `size * size` block per role in sorted name order, laid
//! out as a row-major adjacency matrix (bit `from * size + to`). Counter
//! value k yields interpretation number k, so the low-order bits vary
//! fastest and the order is reproducible.

use super::{ElemSet, Interpretation, ModelError, Signature};

fn layout(sig: &Signature, size: usize) -> Result<u32, ModelError> {
    if size == 0 {
        return Err(ModelError::EmptyDomain);
    }
    if size > super::MAX_DOMAIN {
        return Err(ModelError::DomainTooLarge {
            size,
            max: super::MAX_DOMAIN,
        });
    }
    let bits = sig.extension_bits(size);
    if bits >= 127 {
        return Err(ModelError::CapExceeded { bits });
    }
    Ok(bits)
}

/// Number of interpretations of the given size, `None` if it overflows u128.
pub fn interpretation_count(sig: &Signature, size: usize) -> Option<u128> {
    1u128.checked_shl(sig.extension_bits(size))
}

fn template(sig: &Signature, size: usize) -> Result<Interpretation, ModelError> {
    let mut interp = Interpretation::canonical(size)?;
    for c in sig.concepts() {
        interp.set_concept(c.clone(), ElemSet::EMPTY);
    }
    for r in sig.roles() {
        interp.set_role(r.clone(), &[]);
    }
    Ok(interp)
}

/// Writes the extensions encoded by `counter` into `interp`, which must be a
/// template over the same signature and size.
fn apply_bits(interp: &mut Interpretation, size: usize, counter: u128) {
    let mut offset = 0u32;
    for ext in interp.concepts_mut().values_mut() {
        *ext = ElemSet::from_bits(((counter >> offset) as u64) & ElemSet::full(size).bits());
        offset += size as u32;
    }
    for rows in interp.roles_mut().values_mut() {
        for (from, row) in rows.iter_mut().enumerate() {
            let row_bits = (counter >> (offset + (from * size) as u32)) as u64;
            *row = ElemSet::from_bits(row_bits & ElemSet::full(size).bits());
        }
        offset += (size * size) as u32;
    }
}

/// Iterator over every interpretation of the signature with canonical domain
/// `d1 .. dsize`, in the documented deterministic order.
pub struct InterpretationIter {
    template: Interpretation,
    size: usize,
    counter: u128,
    total: u128,
}

impl Iterator for InterpretationIter {
    type Item = Interpretation;

    fn next(&mut self) -> Option<Interpretation> {
        if self.counter >= self.total {
            return None;
        }
        let mut interp = self.template.clone();
        apply_bits(&mut interp, self.size, self.counter);
        self.counter += 1;
        Some(interp)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.total - self.counter;
        let rest = usize::try_from(rest).ok();
        (rest.unwrap_or(usize::MAX), rest)
    }
}

/// Enumerates every interpretation over `sig` with exactly `size` elements.
pub fn enumerate_interpretations(
    sig: &Signature,
    size: usize,
) -> Result<InterpretationIter, ModelError> {
    let bits = layout(sig, size)?;
    Ok(InterpretationIter {
        template: template(sig, size)?,
        size,
        counter: 0,
        total: 1u128 << bits,
    })
}

/// Visits every interpretation in enumeration order, reusing one buffer (no
/// per-item allocation). Stops early when `visit` returns true; the return
/// value says whether that happened.
pub(crate) fn scan_interpretations(
    sig: &Signature,
    size: usize,
    mut visit: impl FnMut(&Interpretation) -> bool,
) -> Result<bool, ModelError> {
    let bits = layout(sig, size)?;
    let mut interp = template(sig, size)?;
    for counter in 0..(1u128 << bits) {
        apply_bits(&mut interp, size, counter);
        if visit(&interp) {
            return Ok(true);
        }
    }
    Ok(false)
}
