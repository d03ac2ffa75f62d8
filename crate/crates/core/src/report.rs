//! Everything `ncpoly analyze` computes for one polynomial.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::monodromy::{side_analysis_with, GeoComPoint, SideChains, SideConstellations};
use crate::poly::{critical_data_seeded, ComplexPoly, CriticalData, Rectangle, SideRegularity};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub poly: ComplexPoly,
    pub rectangle: Rectangle,
    pub critical: CriticalData,
    pub side_chains: SideChains,
    pub geocom: GeoComPoint,
    pub constellations: SideConstellations,
    pub regularity: SideRegularity,
    pub tol: f64,
    pub seed: u64,
}

impl AnalysisReport {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
}

/// Runs the full pipeline. `tol = 0` selects the default clustering tolerance.
pub fn analyze(p: &ComplexPoly, rect: Option<Rectangle>, tol: f64, seed: u64) -> Result<AnalysisReport> {
    let cd = critical_data_seeded(p, tol, seed)?;
    let a = side_analysis_with(p, cd, rect)?;
    Ok(AnalysisReport {
        poly: p.clone(),
        rectangle: a.rectangle,
        critical: a.critical.clone(),
        side_chains: a.side_chains()?,
        geocom: a.geocom()?,
        constellations: a.constellations()?,
        regularity: a.regularity,
        tol,
        seed,
    })
}
