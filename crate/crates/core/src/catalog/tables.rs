use super::{dda, family_element_with_max, t, word, Family, VerificationReport};
use crate::tree::Element;

struct Names {
    max: usize,
}

impl Names {
    fn get(&self, f: Family, m: usize) -> Element {
        family_element_with_max(f, m, self.max).expect("index within the table range")
    }
    fn x(&self, m: usize) -> Element {
        self.get(Family::X, m)
    }
    fn u(&self, m: usize) -> Element {
        self.get(Family::U, m)
    }
    fn v(&self, m: usize) -> Element {
        self.get(Family::V, m)
    }
}

fn prod(factors: &[&Element]) -> Element {
    Element::product(factors.iter().map(|&e| e.clone()))
}

/// `None` when a component is not in `K`; the identity using it then fails.
fn pair_k(l: Element, r: Element) -> Option<Element> {
    Some(Element::pair(super::certify(&l)?, super::certify(&r)?))
}

/// Checks every identity of the conjugation tables for `t, u, v, x0` and the
/// families `x_m, u_m, v_m` with `m <= max_m`, by deciding
/// `lhs * rhs^-1 = 1` with the contraction algorithm.
pub fn verify_conjugation_tables(max_m: usize) -> VerificationReport {
    let n = Names { max: max_m + 1 };
    let (a, b, c, d, e) = (word("a"), word("b"), word("c"), word("d"), dda());
    let (tt, u, v, x0) = (t(), n.u(0), n.v(0), n.x(0));
    let uu = super::family_element(Family::UPair, 0).expect("index 0");
    let mut report = VerificationReport::default();
    let mut check = |id: String, table: &str, inst: String, lhs: Element, rhs: Option<Element>| {
        let pass = rhs.is_some_and(|rhs| lhs.mul(&rhs.inverse()).is_identity());
        report.push(id, table, inst, pass);
    };
    let conj = [("a", &a), ("b", &b), ("c", &c), ("d", &d), ("dd^a", &e)];

    let t_rhs = [
        tt.inverse(),
        tt.inverse(),
        prod(&[&tt.inverse(), &v]),
        prod(&[&v.inverse(), &tt]),
        prod(&[&v.inverse(), &tt, &u]),
    ];
    let u_rhs = [v.clone(), u.inverse(), u.inverse(), u.clone(), u.inverse()];
    let v_rhs = [
        u.clone(),
        prod(&[&tt.inverse(), &v.inverse(), &tt]),
        prod(&[&tt.inverse(), &v, &tt]),
        v.inverse(),
        v.inverse(),
    ];
    let x0_rhs = [x0.clone(), prod(&[&n.u(1), &x0]), x0.clone(), prod(&[&n.u(1), &x0]), prod(&[&uu, &x0])];
    for (base, name, rhs) in [(&tt, "t", &t_rhs), (&u, "u", &u_rhs), (&v, "v", &v_rhs), (&x0, "x0", &x0_rhs)] {
        for ((cname, y), r) in conj.iter().zip(rhs.iter()) {
            check(format!("{name}^{cname}"), &format!("conjugates of {name}"), String::new(), base.conjugate(y), Some(r.clone()));
        }
    }

    // case split on m mod 3: true means the conjugate is u_{m+1} x_m, false means x_m
    let moved_b = [true, false, true];
    let moved_c = [false, true, true];
    let moved_d = [true, true, false];
    for m in 0..=max_m {
        let xm = n.x(m);
        let shifted = prod(&[&n.u(m + 1), &xm]);
        for (cname, y, table) in [("b", &b, &moved_b), ("c", &c, &moved_c), ("d", &d, &moved_d)] {
            let rhs = if table[m % 3] { shifted.clone() } else { xm.clone() };
            check(format!("x{m}^{cname}"), &format!("x_m^{cname}"), format!("m={m}"), xm.conjugate(y), Some(rhs));
        }
    }
    check("x0^dd^a".into(), "x_m^(dd^a)", "m=0".into(), x0.conjugate(&e), Some(prod(&[&uu, &x0])));
    for m in 1..=max_m {
        let xm = n.x(m);
        let lhs = xm.conjugate(&e);
        check(
            format!("x{m}^dd^a=(1,x{}^b)", m - 1),
            "x_m^(dd^a)",
            format!("m={m}"),
            lhs.clone(),
            pair_k(Element::identity(), n.x(m - 1).conjugate(&b)),
        );
        let rhs = if moved_d[m % 3] { prod(&[&n.u(m + 1), &xm]) } else { xm.clone() };
        check(format!("x{m}^dd^a"), "x_m^(dd^a)", format!("m={m}"), lhs, Some(rhs));
    }

    let x1 = n.x(1);
    let x1x0 = x1.conjugate(&x0);
    check("x1^x0=(1,x0^dd^a)".into(), "x_1^(x_0)", String::new(), x1x0.clone(), pair_k(Element::identity(), x0.conjugate(&e)));
    let one_one_u_u = pair_k(Element::identity(), uu.clone());
    check("x1^x0=(1,1,u,u)x1".into(), "x_1^(x_0)", String::new(), x1x0, one_one_u_u.map(|p| prod(&[&p, &x1])));

    for m in 2..=max_m {
        for k in 0..m - 1 {
            let xm = n.x(m);
            let rhs = if (m - k) % 3 == 0 { xm.clone() } else { prod(&[&n.u(m + 1), &xm]) };
            check(format!("x{m}^x{k}"), "x_m^(x_n)", format!("n={k},m={m}"), xm.conjugate(&n.x(k)), Some(rhs));
        }
    }

    for m in 0..=max_m {
        let um = n.u(m);
        let rhs_b = if m % 3 == 2 { um.clone() } else { um.inverse() };
        check(format!("u{m}^b"), "u_m^b", format!("m={m}"), um.conjugate(&b), Some(rhs_b));
        // at m = 0 the case split would give u, but u^(dd^a) = u^-1 (checked above)
        if m >= 1 {
            let rhs_e = if m % 3 == 0 { um.clone() } else { um.inverse() };
            check(format!("u{m}^dd^a"), "u_m^(dd^a)", format!("m={m}"), um.conjugate(&e), Some(rhs_e));
        }
    }

    for m in 0..=max_m {
        let vm = n.v(m);
        let around = |inner: Element| {
            let prev = n.v(m - 1);
            prod(&[&prev.inverse(), &inner, &prev])
        };
        if m >= 1 {
            let rhs_b = match m % 3 {
                0 => around(vm.inverse()),
                1 => around(vm.clone()),
                _ => vm.inverse(),
            };
            check(format!("v{m}^b"), "v_m^b", format!("m={m}"), vm.conjugate(&b), Some(rhs_b));
        }
        let rhs_e = match m % 3 {
            0 => vm.inverse(),
            1 => around(vm.inverse()),
            _ => around(vm.clone()),
        };
        check(format!("v{m}^dd^a"), "v_m^(dd^a)", format!("m={m}"), vm.conjugate(&e), Some(rhs_e));
    }

    check("u1=x0^b*x0".into(), "redundant generators", String::new(), n.u(1), Some(prod(&[&x0.conjugate(&b), &x0])));
    if max_m >= 2 {
        check("u3=[x0,x2]".into(), "redundant generators", String::new(), n.u(3), Some(x0.commutator(&n.x(2))));
    }
    report
}
