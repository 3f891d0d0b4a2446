use num_traits::Zero;

use super::{GcaError, GcaPresentation, Monomial, Poly};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `H^n` of a presentation: a basis of cocycle representatives.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: i32,
    pub dimension: usize,
    pub representatives: Vec<Poly>,
    /// Dimension of the cochains `C^n`, `ker d_n` and `im d_{n-1}`.
    pub cochain_dimension: usize,
    pub cycle_dimension: usize,
    pub boundary_dimension: usize,
}

impl GcaPresentation {
    /// Matrix of `d: C^n -> C^{n+1}` in the monomial bases.
    pub fn differential_matrix(
        &self,
        source: &[Monomial],
        target: &[Monomial],
    ) -> Result<Matrix, GcaError> {
        let mut columns = Vec::with_capacity(source.len());
        for m in source {
            let dm = self.apply_d(&self.monomial_poly(m.clone()))?;
            columns.push(self.coordinates(&dm, target)?);
        }
        Ok(Matrix::from_columns(target.len(), &columns))
    }

    pub fn cohomology(&self, n: i32) -> Result<CohomologyGroup, GcaError> {
        let below = self.basis_in_degree(n - 1)?;
        let here = self.basis_in_degree(n)?;
        let above = self.basis_in_degree(n + 1)?;
        let d_in = self.differential_matrix(&below, &here)?;
        let d_out = self.differential_matrix(&here, &above)?;

        let cycles = d_out.kernel();
        let boundaries: Vec<Vec<Scalar>> = (0..d_in.cols())
            .map(|j| d_in.column(j))
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .collect();
        let boundary_rank = if boundaries.is_empty() {
            0
        } else {
            Matrix::from_rows(here.len(), boundaries.clone()).rank()
        };

        // extend a basis of the boundaries by cycles, keeping the cycles that
        // raise the rank
        let mut span: Vec<Vec<Scalar>> = boundaries;
        let mut rank = boundary_rank;
        let mut representatives = Vec::new();
        for z in &cycles {
            span.push(z.clone());
            let r = Matrix::from_rows(here.len(), span.clone()).rank();
            if r > rank {
                rank = r;
                representatives.push(self.from_coordinates(z, &here));
            } else {
                span.pop();
            }
        }
        Ok(CohomologyGroup {
            degree: n,
            dimension: representatives.len(),
            representatives,
            cochain_dimension: here.len(),
            cycle_dimension: cycles.len(),
            boundary_dimension: boundary_rank,
        })
    }
}
