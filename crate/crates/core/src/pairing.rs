use num_integer::Roots;

/// Cantor pairing `⟨a, b⟩ = (a+b)(a+b+1)/2 + b`.
pub fn cantor_pair(a: u64, b: u64) -> Option<u64> {
    let s = a.checked_add(b)?;
    let tri = (u128::from(s) * (u128::from(s) + 1) / 2).checked_add(u128::from(b))?;
    u64::try_from(tri).ok()
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let z128 = u128::from(z);
    let mut w = ((8 * z128 + 1).sqrt() - 1) / 2;
    // guard against rounding at the triangle boundary
    while w * (w + 1) / 2 > z128 {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z128 {
        w += 1;
    }
    let b = z128 - w * (w + 1) / 2;
    let a = w - b;
    (a as u64, b as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_values() {
        let listed: Vec<_> = (0..6).map(cantor_unpair).collect();
        assert_eq!(listed, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        assert_eq!(cantor_pair(u64::MAX, 1), None);
    }

    proptest! {
        #[test]
        fn pair_unpair_roundtrip(a in 0u64..1 << 30, b in 0u64..1 << 30) {
            let z = cantor_pair(a, b).unwrap();
            prop_assert_eq!(cantor_unpair(z), (a, b));
        }

        #[test]
        fn unpair_pair_roundtrip(z in any::<u64>()) {
            let (a, b) = cantor_unpair(z);
            prop_assert_eq!(cantor_pair(a, b), Some(z));
        }
    }
}
