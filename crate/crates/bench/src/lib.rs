//! Fixtures shared by the benchmarks.

use biquad_core::{make_field, Field, FieldElement};

/// `61 + sqrt(31) + sqrt(66) + sqrt(2046)` in `Q(sqrt 66, sqrt 31)`.
pub fn table_row_one() -> FieldElement {
    let k = make_field(66, 31).expect("square-free");
    FieldElement::parse(&k, "61 + sqrt(31) + sqrt(66) + sqrt(2046)").expect("valid element")
}

/// Deterministic pseudo-random elements with coordinates up to `bound`.
pub fn sample_elements(k: &Field, count: usize, bound: i64) -> Vec<FieldElement> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % (2 * bound as u64 + 1)) as i64 - bound
    };
    (0..count)
        .map(|_| {
            let basis = k.integral_basis();
            let mut c = [0i64; 4];
            for b in basis {
                let t = next();
                for i in 0..4 {
                    c[i] += t * b[i];
                }
            }
            FieldElement::new(k, c)
        })
        .collect()
}
