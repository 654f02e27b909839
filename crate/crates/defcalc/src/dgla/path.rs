use std::sync::Arc;

use num_traits::Zero;

use super::calculus::decompose;
use super::ctx::{LieCtx, TensorCtx};
use super::Dgla;
use crate::artin::ArtinAlgebra;
use crate::error::Result;
use crate::exactalg::Q;
use crate::forms::{chart_coord, chart_dcoord, chart_homotopy, chart_vertex_projection, face, from_chart, to_chart, PolyForm};

/// `L[ξ, dξ] ⊗ m_A = Ω₁ ⊗ L ⊗ m_A` with a total-degree cap; `ξ` is the
/// chart coordinate on `Δ¹` so `ξ = 0` and `ξ = 1` are faces 0 and 1.
#[derive(Debug, Clone)]
pub struct PathDgla {
    pub ctx: TensorCtx<PolyForm>,
    pub cap: u32,
}

pub fn homotopy_path_dgla(l: Arc<Dgla>, a: Arc<ArtinAlgebra>, cap: u32) -> PathDgla {
    PathDgla { ctx: TensorCtx::new(l, a, PolyForm::zero(1)), cap }
}

impl PathDgla {
    pub fn xi() -> PolyForm {
        chart_coord(1, 0)
    }

    pub fn dxi() -> PolyForm {
        chart_dcoord(1, 0)
    }

    pub fn constant(&self, x: &[Q]) -> Vec<PolyForm> {
        self.ctx.from_q(x)
    }

    /// Multiplies every coefficient by the form `w`.
    pub fn times(&self, x: &[Q], w: &PolyForm) -> Vec<PolyForm> {
        x.iter().map(|c| if c.is_zero() { PolyForm::zero(1) } else { w.scale(c) }).collect()
    }

    /// Evaluation at `ξ = 0` (`at = 0`) or `ξ = 1` (`at = 1`).
    pub fn eval(&self, z: &[PolyForm], at: usize) -> Vec<Q> {
        let k = if at == 0 { 0 } else { 1 };
        z.iter().map(|f| face(k, f).expect("valid face").constant_term()).collect()
    }

    pub fn check_cap(&self, z: &[PolyForm]) -> Result<()> {
        z.iter().try_for_each(|f| f.check_cap(self.cap))
    }

    /// For Maurer-Cartan `z(ξ, dξ)`, returns `T` with `z(1) = e^{T} * z(0)`.
    pub fn homotopy_to_gauge(&self, z: &Vec<PolyForm>) -> Result<Vec<Q>> {
        self.check_cap(z)?;
        let proj = |x: &Vec<PolyForm>| -> Vec<PolyForm> { x.iter().map(|f| from_chart(&chart_vertex_projection(&to_chart(f)))).collect() };
        let hom = |x: &Vec<PolyForm>| -> Vec<PolyForm> { x.iter().map(|f| from_chart(&chart_homotopy(&to_chart(f)))).collect() };
        let (_, c) = decompose(&self.ctx, z, proj, hom)?;
        self.check_cap(&c)?;
        Ok(self.eval(&c, 1))
    }
}

impl LieCtx for PathDgla {
    type E = Vec<PolyForm>;
    fn zero(&self) -> Self::E {
        self.ctx.zero()
    }
    fn is_zero(&self, x: &Self::E) -> bool {
        self.ctx.is_zero(x)
    }
    fn add(&self, x: &Self::E, y: &Self::E) -> Self::E {
        self.ctx.add(x, y)
    }
    fn scale(&self, x: &Self::E, c: &Q) -> Self::E {
        self.ctx.scale(x, c)
    }
    fn bracket(&self, x: &Self::E, y: &Self::E) -> Self::E {
        self.ctx.bracket(x, y)
    }
    fn d(&self, x: &Self::E) -> Self::E {
        self.ctx.d(x)
    }
    fn depth(&self) -> usize {
        self.ctx.depth()
    }
}
