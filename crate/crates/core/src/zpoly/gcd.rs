use super::IntPoly;

impl IntPoly {
    /// Primitive gcd over Q with positive leading coefficient.
    ///
    /// `gcd(0, 0)` is the zero polynomial.
    pub fn gcd_q(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        // primitive remainder sequence
        while !b.is_zero() {
            if b.deg() == 0 {
                return IntPoly::one();
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Product of the distinct irreducible factors, primitive: `f / gcd(f, f')`.
    pub fn squarefree_part(&self) -> IntPoly {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return f;
        }
        let g = f.gcd_q(&f.derivative());
        f.div_exact(&g)
            .expect("gcd with derivative divides a primitive polynomial")
            .primitive_part()
    }

    /// Squarefree decomposition of the primitive part: pairs `(s_i, i)` with
    /// `pp(f) = prod s_i^i` and each `s_i` squarefree, pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive_part();
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        let mut b = f.gcd_q(&f.derivative());
        let mut c = f.div_exact(&b).expect("exact").primitive_part();
        let mut i = 1;
        while c.deg() > 0 {
            let y = c.gcd_q(&b);
            let z = c.div_exact(&y).expect("exact").primitive_part();
            if z.deg() > 0 {
                out.push((z, i));
            }
            b = b.div_exact(&y).expect("exact").primitive_part();
            c = y;
            i += 1;
        }
        out
    }
}
