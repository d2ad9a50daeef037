use renyisim_core::{enumerate_types, Error, Pmf, ProductView};

/// Exact `F(j) = P^n{ -(1/n) log P^n(x^n) < j }` by summing type-class masses, and the
/// estimate `-(1/n) log F(j)`.
pub fn empirical_spectrum(p: &Pmf, n: u32, j: f64) -> Result<(f64, f64), Error> {
    let view = ProductView::new(p.clone(), n)?;
    let mut f = 0.0;
    for t in enumerate_types(p.len(), n)? {
        let lm = view.type_log_mass(&t);
        if lm == f64::NEG_INFINITY {
            continue;
        }
        if -lm / (n as f64) < j {
            f += (lm + t.log_class_size()).exp();
        }
    }
    let f = f.min(1.0);
    Ok((f, if f > 0.0 { (-f.ln() / n as f64).max(0.0) } else { f64::INFINITY }))
}
