use super::{subgroup_generators, t, CatalogError, SubgroupSpec, VerificationReport};
use crate::perm::{image_at_level, Perm, PermGroup, Tower};

/// Image of `K` at level `n`: the normal closure of the image of `t`.
pub(crate) fn k_image(tower: &Tower, n: usize) -> Result<PermGroup, CatalogError> {
    Ok(tower.level_quotient(n)?.normal_closure(&[image_at_level(&t(), n)])?)
}

/// Group generated by copies of `inner` below every level-`l` vertex.
pub(crate) fn vertex_product(level: usize, l: usize, inner: &PermGroup) -> Result<PermGroup, CatalogError> {
    let gens = inner.essential_generators();
    let mut out = Vec::new();
    for w in 0..1usize << l {
        out.extend(gens.iter().map(|g| Perm::embed(g, l, w)));
    }
    Ok(PermGroup::new(level, out)?)
}

/// Checks modulo `st(level)`: `K x K <= psi(K)`; the image of `K_n` (from
/// its generator list) equals the product of the `2^n` vertex copies of `K`
/// and is normal, for `n = 2, 3`; and `st(n)` equals the product of the
/// `2^(n-3)` vertex copies of `st(3)` for `4 <= n < level`.
pub fn verify_branching(tower: &Tower, level: usize) -> Result<VerificationReport, CatalogError> {
    if level < 4 {
        return Err(CatalogError::LevelTooSmall { level, min: 4 });
    }
    let q = tower.level_quotient(level)?;
    let k = k_image(tower, level)?;
    let k_below = k_image(tower, level - 1)?;
    let mut report = VerificationReport::default();
    let inst = |extra: String| format!("{extra}modulo st({level})");

    let lhs = vertex_product(level, 1, &k_below)?;
    report.push("KxK<=psi(K)", "K x K in psi(K)", inst(String::new()), k.contains_group(&lhs)?);

    let k1 = tower.image_group(&subgroup_generators(SubgroupSpec::K1)?, level)?;
    let st1 = q.level_stabilizer_image(1)?;
    report.push("K1<=st(1)", "K x K in psi(K)", inst(String::new()), st1.contains_group(&k1)?);

    for n in [2, 3] {
        if n >= level {
            continue;
        }
        let kn = tower.image_group(&subgroup_generators(SubgroupSpec::Kn(n))?, level)?;
        let copies = vertex_product(level, n, &k_image(tower, level - n)?)?;
        let at = inst(format!("n={n}, "));
        report.push(format!("K{n}=K^(2^{n})"), "K_n as product of copies of K", at.clone(), kn.same_group(&copies)?);
        report.push(format!("K{n}<=G"), "K_n as product of copies of K", at.clone(), q.contains_group(&kn)?);
        report.push(format!("K{n} normal"), "K_n as product of copies of K", at, kn.is_normalized_by(&q)?);
    }

    for n in 4..level {
        let st_n = q.level_stabilizer_image(n)?;
        let st3 = tower.level_quotient(level - (n - 3))?.level_stabilizer_image(3)?;
        let copies = vertex_product(level, n - 3, &st3)?;
        report.push(
            format!("st({n})=st(3)^(2^{})", n - 3),
            "st(n) as product of copies of st(3)",
            inst(format!("n={n}, ")),
            st_n.same_group(&copies)?,
        );
    }
    Ok(report)
}
