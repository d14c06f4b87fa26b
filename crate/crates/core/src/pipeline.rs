//! Normalize, slice, minimize and repair: the end-to-end parameterization run.

use std::time::Instant;

use serde::Serialize;

use crate::bijectivity::{correct_overlaps, count_folded, Correction};
use crate::energy::{ratio_statistics, AreaMeasure};
use crate::error::{Error, Result};
use crate::mesh::{write_obj, TriMesh};
use crate::param::ParamMap;
use crate::slicer::{slice_genus_one, slice_genus_zero, CutPath, Genus, SlicedMesh};
use crate::solver::{pcg_minimize, SolveResult, SolverConfig, StopReason};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// `rho = |tau|`, the authalic objective.
    Area,
    /// `rho = |M| / m`, equalizing image face areas.
    Const,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub genus: Genus,
    pub measure: Measure,
    /// Required for genus one.
    pub loops: Option<(CutPath, CutPath)>,
    pub solver: SolverConfig<f64>,
    pub force_correct: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { genus: Genus::Zero, measure: Measure::Area, loops: None, solver: SolverConfig::default(), force_correct: false }
    }
}

/// Row of the run summary, with the columns of a results table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub genus: usize,
    pub measure: Measure,
    pub vertices: usize,
    pub faces: usize,
    pub sliced_vertices: usize,
    pub iterations: usize,
    pub stop: &'static str,
    pub authalic_energy: f64,
    pub r_area_mean: f64,
    pub r_area_sd: f64,
    pub harmonic_r_area_sd: f64,
    pub folds_before: usize,
    pub folds_after: usize,
    /// Folded faces of the optimized map before correction.
    pub folded_faces: Vec<usize>,
    pub flagged_steps: usize,
    pub preconditioner_regularized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_secs: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// Sliced mesh in unit-area units.
    pub sliced: SlicedMesh<f64>,
    /// Factor that took the input to unit area.
    pub scale: f64,
    pub solve: SolveResult<f64>,
    pub correction: Correction<f64>,
    /// Final map after fold repair.
    pub map: ParamMap<f64>,
    pub summary: Summary,
}

fn stop_name(s: StopReason) -> &'static str {
    match s {
        StopReason::EnergyDeficit => "energy_deficit",
        StopReason::GradientNorm => "gradient_norm",
        StopReason::MaxIterations => "max_iterations",
        StopReason::NonFinite => "non_finite",
    }
}

/// Slices a unit-area mesh for the configured genus.
pub fn slice(mesh: &TriMesh<f64>, cfg: &PipelineConfig) -> Result<SlicedMesh<f64>> {
    match cfg.genus {
        Genus::Zero => slice_genus_zero(mesh),
        Genus::One => {
            let (a, b) = cfg.loops.as_ref().ok_or_else(|| Error::LoopPrecondition("loops file required".into()))?;
            slice_genus_one(mesh, a, b)
        }
    }
}

pub fn run(mesh: &TriMesh<f64>, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    let start = Instant::now();
    let chi = mesh.euler_characteristic();
    let expected = 2 - 2 * cfg.genus.index() as i64;
    if !mesh.is_closed() || chi != expected {
        return Err(Error::SliceInconsistent(format!(
            "input must be a closed genus-{} surface, found chi = {chi}",
            cfg.genus.index()
        )));
    }
    let (unit, scale) = mesh.normalize_to_unit_area()?;
    let sliced = slice(&unit, cfg)?;
    let rho = match cfg.measure {
        Measure::Area => AreaMeasure::face_areas(&sliced.mesh),
        Measure::Const => AreaMeasure::constant(&sliced.mesh),
    };
    let solve = pcg_minimize(&sliced.mesh, sliced.segments()?, &rho, &cfg.solver)?;
    let correction = correct_overlaps(&sliced.mesh, &solve.map, cfg.force_correct)?;
    let map = correction.map.clone();

    let stats = ratio_statistics(&sliced.mesh, &map)?;
    let harmonic = solve.harmonic.as_ref().unwrap_or(&solve.initial);
    let harmonic_stats = ratio_statistics(&sliced.mesh, harmonic)?;
    let summary = Summary {
        genus: cfg.genus.index(),
        measure: cfg.measure,
        vertices: mesh.n_vertices(),
        faces: mesh.n_faces(),
        sliced_vertices: sliced.mesh.n_vertices(),
        iterations: solve.iterations(),
        stop: stop_name(solve.stop),
        authalic_energy: stats.authalic_energy,
        r_area_mean: stats.r_area_mean,
        r_area_sd: stats.r_area_sd,
        harmonic_r_area_sd: harmonic_stats.r_area_sd,
        folds_before: correction.folds_before,
        folds_after: correction.folds_after,
        folded_faces: count_folded(&sliced.mesh, &solve.map).faces,
        flagged_steps: solve.flagged_steps(),
        preconditioner_regularized: solve.preconditioner_regularized,
        time_secs: Some(start.elapsed().as_secs_f64()),
    };
    Ok(PipelineOutput { sliced, scale, solve, correction, map, summary })
}

impl PipelineOutput {
    /// OBJ of the sliced mesh in input units with the parameterization as texture coordinates.
    pub fn map_obj(&self) -> String {
        let mesh = self.sliced.mesh.scaled(1.0 / self.scale);
        let uv: Vec<[f64; 2]> = self.map.points();
        write_obj(&mesh, Some(&uv), &[format!("genus {}", self.summary.genus)])
    }
}
