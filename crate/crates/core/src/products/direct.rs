use crate::error::{QgError, Result};
use crate::magma::FiniteMagma;
use crate::structure::{fan_certificate, FanCertificate};

pub const DEFAULT_MAX_PRODUCT_ORDER: usize = 2048;

/// Mixed-radix encoding of tuples, first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRadix {
    radices: Vec<usize>,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        MixedRadix { radices }
    }

    pub fn total(&self) -> usize {
        self.radices.iter().product()
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.radices).fold(0, |acc, (&d, &r)| acc * r + d)
    }

    pub fn decode(&self, mut x: usize) -> Vec<usize> {
        let mut digits = vec![0; self.radices.len()];
        for (d, &r) in digits.iter_mut().zip(&self.radices).rev() {
            *d = x % r;
            x /= r;
        }
        digits
    }
}

pub fn direct_product(factors: &[FiniteMagma]) -> Result<FiniteMagma> {
    direct_product_with_limit(factors, DEFAULT_MAX_PRODUCT_ORDER)
}

/// Componentwise product of a nonempty list of magmas.
pub fn direct_product_with_limit(factors: &[FiniteMagma], max_order: usize) -> Result<FiniteMagma> {
    if factors.is_empty() {
        return Err(QgError::Precondition(
            "a direct product needs at least one factor".into(),
        ));
    }
    let order = factors
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.order()).filter(|&o| o <= max_order));
    let Some(order) = order else {
        return Err(QgError::Capacity(format!(
            "product of orders {:?} exceeds the ceiling {max_order}",
            factors.iter().map(FiniteMagma::order).collect::<Vec<_>>()
        )));
    };
    let radix = MixedRadix::new(factors.iter().map(FiniteMagma::order).collect());
    let digits: Vec<Vec<usize>> = (0..order).map(|x| radix.decode(x)).collect();
    FiniteMagma::from_fn(order, |x, y| {
        let prod: Vec<usize> = factors
            .iter()
            .zip(digits[x].iter().zip(&digits[y]))
            .map(|(f, (&a, &b))| f.mul(a, b))
            .collect();
        radix.encode(&prod)
    })
}

/// Fan certificate of a product of fan quasigroups whose associators are
/// the componentwise associators of the factors. `None` if some factor is
/// not a fan quasigroup.
pub fn direct_product_certificate(factors: &[FiniteMagma]) -> Result<Option<FanCertificate>> {
    let product = direct_product(factors)?;
    let Some(certs) = factors.iter().map(fan_certificate).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let radix = MixedRadix::new(factors.iter().map(FiniteMagma::order).collect());
    let componentwise = |assoc: fn(&FanCertificate, usize, usize, usize) -> usize| {
        let certs = &certs;
        let radix = &radix;
        move |a: usize, b: usize, c: usize| {
            let (da, db, dc) = (radix.decode(a), radix.decode(b), radix.decode(c));
            let parts: Vec<usize> = certs
                .iter()
                .enumerate()
                .map(|(j, cert)| assoc(cert, da[j], db[j], dc[j]))
                .collect();
            radix.encode(&parts)
        }
    };
    FanCertificate::from_associators(
        product,
        componentwise(FanCertificate::t),
        componentwise(FanCertificate::p),
    )
    .map(Some)
}
