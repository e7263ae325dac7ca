//! Block upper-triangular maps respecting the natural three-step
//! filtration with graded pieces (V, gr Z, gr V), and the degree
//! consequences of q3 along a cobordism.

use crate::error::{Error, Result};

use super::gf2::Gf2Matrix;
use super::module::FilteredSpace;

/// A map written against the three-step filtrations of source and target,
/// with graded pieces (V, gr Z, gr V). Strictly lower blocks vanish, the
/// V block `f11` is filtered for the x-order filtrations, and the gr V
/// block is the associated graded of `f11` (so it is derived, not stored
/// independently).
///
/// ```text
/// | f11  f12   f13    |
/// | 0    grEps f23    |
/// | 0    0     grF11  |
/// ```
pub struct BlockTriangularMap {
    src_v: FilteredSpace,
    dst_v: FilteredSpace,
    src_z_dim: usize,
    dst_z_dim: usize,
    f11: Gf2Matrix,
    f12: Gf2Matrix,
    f13: Gf2Matrix,
    gr_eps: Gf2Matrix,
    f23: Gf2Matrix,
    gr_f11: Gf2Matrix,
}

impl BlockTriangularMap {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        src_v: FilteredSpace,
        dst_v: FilteredSpace,
        src_z_dim: usize,
        dst_z_dim: usize,
        f11: Gf2Matrix,
        f12: Gf2Matrix,
        f13: Gf2Matrix,
        gr_eps: Gf2Matrix,
        f23: Gf2Matrix,
    ) -> Result<Self> {
        let (sv, dv) = (src_v.total_dim(), dst_v.total_dim());
        let shapes = [
            (f11.rows(), f11.cols(), dv, sv, "f11"),
            (f12.rows(), f12.cols(), dv, src_z_dim, "f12"),
            (f13.rows(), f13.cols(), dv, sv, "f13"),
            (gr_eps.rows(), gr_eps.cols(), dst_z_dim, src_z_dim, "grEps"),
            (f23.rows(), f23.cols(), dst_z_dim, sv, "f23"),
        ];
        for (r, c, er, ec, name) in shapes {
            if (r, c) != (er, ec) {
                return Err(Error::ShapeMismatch(format!(
                    "block {name} is {r}x{c}, expected {er}x{ec}"
                )));
            }
        }
        // f11 must map F_r into F_r for the distinguished bases.
        let (src_lv, dst_lv) = (src_v.basis_levels(), dst_v.basis_levels());
        for i in 0..dv {
            for j in 0..sv {
                if f11.get(i, j) && dst_lv[i] > src_lv[j] {
                    return Err(Error::ShapeMismatch(format!(
                        "f11 entry ({i},{j}) raises the filtration level {} -> {}",
                        src_lv[j], dst_lv[i]
                    )));
                }
            }
        }
        let gr_f11 =
            Gf2Matrix::from_fn(dv, sv, |i, j| f11.get(i, j) && dst_lv[i] == src_lv[j]);
        Ok(BlockTriangularMap { src_v, dst_v, src_z_dim, dst_z_dim, f11, f12, f13, gr_eps, f23, gr_f11 })
    }

    pub fn gr_f11(&self) -> &Gf2Matrix {
        &self.gr_f11
    }

    /// The full matrix, with the zero lower-triangular blocks filled in.
    pub fn whole(&self) -> Gf2Matrix {
        let (sv, dv) = (self.src_v.total_dim(), self.dst_v.total_dim());
        let z_sv = Gf2Matrix::zeros(self.dst_z_dim, sv);
        let z_vz = Gf2Matrix::zeros(dv, self.src_z_dim);
        let z_vv = Gf2Matrix::zeros(dv, sv);
        Gf2Matrix::from_blocks(&[
            &[&self.f11, &self.f12, &self.f13],
            &[&z_sv, &self.gr_eps, &self.f23],
            &[&z_vv, &z_vz, &self.gr_f11],
        ])
    }

    /// The consequences of triangularity, each established by an explicit
    /// rank computation rather than by appeal to the block structure.
    pub fn facts(&self) -> BlockMapFacts {
        let whole = self.whole();
        let upper2 = Gf2Matrix::from_blocks(&[
            &[&self.f11, &self.f12],
            &[&Gf2Matrix::zeros(self.dst_z_dim, self.src_v.total_dim()), &self.gr_eps],
        ]);
        let lower2 = Gf2Matrix::from_blocks(&[
            &[&self.gr_eps, &self.f23],
            &[&Gf2Matrix::zeros(self.dst_v.total_dim(), self.src_z_dim), &self.gr_f11],
        ]);

        let whole_injective = whole.is_injective();
        let whole_surjective = whole.is_surjective();
        let f11_injective = self.f11.is_injective();
        let f11_surjective = self.f11.is_surjective();
        let upper2_injective = upper2.is_injective();
        let gr_f11_surjective = self.gr_f11.is_surjective();
        let lower2_surjective = lower2.is_surjective();

        let implications = vec![
            Implication { name: "whole injective => f11 injective", fired: whole_injective, holds: f11_injective },
            Implication { name: "whole injective => upper 2x2 injective", fired: whole_injective, holds: upper2_injective },
            Implication { name: "whole surjective => gr f11 surjective", fired: whole_surjective, holds: gr_f11_surjective },
            Implication { name: "whole surjective => lower 2x2 surjective", fired: whole_surjective, holds: lower2_surjective },
            Implication { name: "gr f11 surjective => f11 surjective", fired: gr_f11_surjective, holds: f11_surjective },
        ];

        BlockMapFacts {
            whole_injective,
            whole_surjective,
            f11_injective,
            f11_surjective,
            upper2_injective,
            gr_f11_surjective,
            lower2_surjective,
            implications,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Implication {
    pub name: &'static str,
    pub fired: bool,
    pub holds: bool,
}

impl Implication {
    pub fn ok(&self) -> bool {
        !self.fired || self.holds
    }
}

#[derive(Clone, Debug)]
pub struct BlockMapFacts {
    pub whole_injective: bool,
    pub whole_surjective: bool,
    pub f11_injective: bool,
    pub f11_surjective: bool,
    pub upper2_injective: bool,
    pub gr_f11_surjective: bool,
    pub lower2_surjective: bool,
    pub implications: Vec<Implication>,
}

impl BlockMapFacts {
    pub fn verify(&self) -> Result<()> {
        for imp in &self.implications {
            if !imp.ok() {
                return Err(Error::Internal(format!("implication failed: {}", imp.name)));
            }
        }
        Ok(())
    }
}

/// The induced map on the top graded piece of Z along a cobordism with the
/// given b^+, read off from the drop in q3: the drop is at most b^+, the
/// graded map is 1 exactly when the drop is the full b^+.
pub fn gr_eps_from_q3(q3_source: i64, q3_target: i64, b_plus: u64) -> Result<u8> {
    let floor = q3_source - b_plus as i64;
    if q3_target < floor {
        return Err(Error::InfeasibleGeometry(format!(
            "q3 cannot drop from {q3_source} below {floor} across b+ = {b_plus}"
        )));
    }
    Ok(u8::from(q3_target == floor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(levels: &[usize]) -> FilteredSpace {
        FilteredSpace::from_levels(levels)
    }

    #[test]
    fn identity_map_satisfies_everything() {
        let v = profile(&[1, 2]);
        let m = BlockTriangularMap::new(
            v.clone(),
            v,
            1,
            1,
            Gf2Matrix::identity(2),
            Gf2Matrix::zeros(2, 1),
            Gf2Matrix::zeros(2, 2),
            Gf2Matrix::identity(1),
            Gf2Matrix::zeros(1, 2),
        )
        .unwrap();
        let facts = m.facts();
        assert!(facts.whole_injective && facts.whole_surjective);
        assert_eq!(m.gr_f11(), &Gf2Matrix::identity(2));
        facts.verify().unwrap();
    }

    #[test]
    fn zero_v_block_with_unit_eps() {
        // f11 = 0, grEps = 1, everything else zero, on one-dimensional
        // pieces: the whole map is neither injective nor surjective and no
        // implication fires.
        let v = profile(&[1]);
        let m = BlockTriangularMap::new(
            v.clone(),
            v,
            1,
            1,
            Gf2Matrix::zeros(1, 1),
            Gf2Matrix::zeros(1, 1),
            Gf2Matrix::zeros(1, 1),
            Gf2Matrix::identity(1),
            Gf2Matrix::zeros(1, 1),
        )
        .unwrap();
        let facts = m.facts();
        assert!(!facts.whole_injective && !facts.whole_surjective);
        assert!(facts.implications.iter().all(|i| !i.fired));
        facts.verify().unwrap();
    }

    #[test]
    fn filtration_violations_are_rejected_by_shape() {
        // source basis at level 1, target at level 2: an entry would raise
        // the level.
        let src = profile(&[1]);
        let dst = profile(&[2]);
        let err = BlockTriangularMap::new(
            src,
            dst,
            0,
            0,
            Gf2Matrix::identity(1),
            Gf2Matrix::zeros(1, 0),
            Gf2Matrix::zeros(1, 1),
            Gf2Matrix::zeros(0, 0),
            Gf2Matrix::zeros(0, 1),
        );
        assert!(matches!(err, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn gr_eps_from_q3_branches() {
        assert_eq!(gr_eps_from_q3(0, 0, 0).unwrap(), 1);
        assert_eq!(gr_eps_from_q3(0, -1, 1).unwrap(), 1);
        assert_eq!(gr_eps_from_q3(0, 0, 1).unwrap(), 0);
        assert!(gr_eps_from_q3(0, -2, 1).is_err());
    }

    #[test]
    fn randomized_implication_suite() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(0xb10c);
        let mut fired = 0usize;
        for sample in 0..500 {
            let src_levels: Vec<usize> = (0..rng.random_range(0..=3))
                .map(|_| rng.random_range(1..=3))
                .collect();
            let dst_levels: Vec<usize> = (0..rng.random_range(0..=3))
                .map(|_| rng.random_range(1..=3))
                .collect();
            let src = profile(&src_levels);
            let dst = profile(&dst_levels);
            let (sz, dz) = (rng.random_range(0..=2), rng.random_range(0..=2));
            let (sv, dv) = (src.total_dim(), dst.total_dim());

            // random filtered f11: entries only where the level does not rise
            let f11 = Gf2Matrix::from_fn(dv, sv, |i, j| {
                dst.basis_levels()[i] <= src.basis_levels()[j] && rng.random_bool(0.5)
            });
            let rand_m =
                |rng: &mut ChaCha8Rng, r: usize, c: usize| Gf2Matrix::from_fn(r, c, |_, _| rng.random_bool(0.5));
            let f12 = rand_m(&mut rng, dv, sz);
            let f13 = rand_m(&mut rng, dv, sv);
            let gr_eps = rand_m(&mut rng, dz, sz);
            let f23 = rand_m(&mut rng, dz, sv);

            let map = BlockTriangularMap::new(src, dst, sz, dz, f11, f12, f13, gr_eps, f23)
                .expect("construction respects shapes");
            let facts = map.facts();
            facts.verify().unwrap_or_else(|e| panic!("sample {sample}: {e}"));
            fired += facts.implications.iter().filter(|i| i.fired).count();
        }
        assert!(fired > 100, "suite exercised only {fired} fired implications");
    }
}
