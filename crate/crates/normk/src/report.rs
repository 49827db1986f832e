//! Report records and their JSON / CSV encodings. Integers are emitted as
//! decimal strings throughout.

use std::io::Write;

use normk_core::classgroup::{class_group, ClassGroupData};
use normk_core::ideals::FracIdeal;
use normk_core::knorm::{check_exactness, k0_structure_with, Exactness, K0Structure};
use normk_core::mv::GenusReport;
use normk_core::units::{fundamental_unit, UnitData};
use normk_core::{Discriminant, QuadNum, Result};
use serde::Serialize;

fn dec<T: ToString>(x: T) -> String {
    x.to_string()
}

fn join(xs: &[String]) -> String {
    xs.join(";")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealOut {
    pub q: String,
    pub a: String,
    pub b: String,
}

impl From<&FracIdeal> for IdealOut {
    fn from(i: &FracIdeal) -> Self {
        Self { q: dec(i.q()), a: dec(i.a()), b: dec(i.b()) }
    }
}

/// `(x + y√Δ)/(2d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadNumOut {
    pub x: String,
    pub y: String,
    pub d: String,
}

impl From<&QuadNum> for QuadNumOut {
    fn from(z: &QuadNum) -> Self {
        Self { x: dec(z.x()), y: dec(z.y()), d: dec(z.d()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitOut {
    pub torsion_order: String,
    pub eps: Option<QuadNumOut>,
    pub eps_norm: String,
    pub h0_units_order: String,
}

impl From<&UnitData> for UnitOut {
    fn from(u: &UnitData) -> Self {
        Self {
            torsion_order: dec(u.torsion_order),
            eps: u.eps.as_ref().map(QuadNumOut::from),
            eps_norm: dec(u.eps_norm),
            h0_units_order: dec(u.h0_units_order),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassGroupReport {
    pub delta: String,
    pub h: String,
    pub h_narrow: String,
    pub divisors: Vec<String>,
    pub rank2: String,
    pub generators: Vec<IdealOut>,
    pub units: UnitOut,
}

impl ClassGroupReport {
    pub fn new(cg: &ClassGroupData, units: &UnitData) -> Self {
        Self {
            delta: dec(cg.disc.delta()),
            h: dec(cg.h),
            h_narrow: dec(cg.h_narrow),
            divisors: cg.divisors.iter().map(dec).collect(),
            rank2: dec(cg.rank2),
            generators: cg.generators.iter().map(IdealOut::from).collect(),
            units: UnitOut::from(units),
        }
    }

    pub fn compute(disc: &Discriminant) -> Self {
        Self::new(&class_group(disc), &fundamental_unit(disc))
    }

    pub fn csv_row(&self) -> ClassGroupCsv {
        let eps = self.units.eps.as_ref();
        ClassGroupCsv {
            delta: self.delta.clone(),
            h: self.h.clone(),
            h_narrow: self.h_narrow.clone(),
            divisors: join(&self.divisors),
            rank2: self.rank2.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| format!("{}*[{},{}]", g.q, g.a, g.b))
                .collect::<Vec<_>>()
                .join(";"),
            torsion_order: self.units.torsion_order.clone(),
            eps_x: eps.map(|e| e.x.clone()).unwrap_or_default(),
            eps_y: eps.map(|e| e.y.clone()).unwrap_or_default(),
            eps_d: eps.map(|e| e.d.clone()).unwrap_or_default(),
            eps_norm: self.units.eps_norm.clone(),
            h0_units_order: self.units.h0_units_order.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassGroupCsv {
    pub delta: String,
    pub h: String,
    pub h_narrow: String,
    pub divisors: String,
    pub rank2: String,
    pub generators: String,
    pub torsion_order: String,
    pub eps_x: String,
    pub eps_y: String,
    pub eps_d: String,
    pub eps_norm: String,
    pub h0_units_order: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessOut {
    pub order_matches: bool,
    pub rho_sigma_trivial: bool,
    pub sigma_injective_iff_h0_two: bool,
    pub ker_rho_eq_im_sigma: bool,
    pub rho_surjective: bool,
    pub kernel_size: String,
}

impl From<&Exactness> for ExactnessOut {
    fn from(e: &Exactness) -> Self {
        Self {
            order_matches: e.order_matches,
            rho_sigma_trivial: e.rho_sigma_trivial,
            sigma_injective_iff_h0_two: e.sigma_injective_iff_h0_two,
            ker_rho_eq_im_sigma: e.ker_rho_eq_im_sigma,
            rho_surjective: e.rho_surjective,
            kernel_size: dec(e.kernel_size),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Report {
    pub delta: String,
    pub h0_units_order: String,
    pub h: String,
    pub k0_order: String,
    pub k0_divisors: Vec<String>,
    pub exactness: ExactnessOut,
    pub pass: bool,
}

impl K0Report {
    pub fn new(k0: &K0Structure, ex: &Exactness) -> Self {
        Self {
            delta: dec(k0.disc.delta()),
            h0_units_order: dec(k0.h0_units_order),
            h: dec(k0.h),
            k0_order: dec(k0.order),
            k0_divisors: k0.divisors.iter().map(dec).collect(),
            exactness: ExactnessOut::from(ex),
            pass: ex.all_pass(),
        }
    }

    pub fn compute(disc: &Discriminant, budget: usize) -> Result<Self> {
        let cg = class_group(disc);
        let units = fundamental_unit(disc);
        let k0 = k0_structure_with(&cg, &units, budget)?;
        let ex = check_exactness(&k0, &cg, &units);
        Ok(Self::new(&k0, &ex))
    }
}

/// One scan row. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub delta: String,
    pub t_fin: String,
    pub t_all: String,
    pub h: String,
    pub rank2: String,
    pub eps_norm: String,
    pub exceptional: bool,
    pub dim_v: String,
    pub dim_h: String,
    pub verdict_69: bool,
    pub verdict_67: bool,
    pub verdict_68: bool,
}

pub const SCAN_COLUMNS: [&str; 12] = [
    "delta",
    "t_fin",
    "t_all",
    "h",
    "rank2",
    "eps_norm",
    "exceptional",
    "dim_v",
    "dim_h",
    "verdict_69",
    "verdict_67",
    "verdict_68",
];

impl From<&GenusReport> for ScanRow {
    fn from(r: &GenusReport) -> Self {
        Self {
            delta: dec(r.delta),
            t_fin: dec(r.t_fin),
            t_all: dec(r.t_all),
            h: dec(r.h),
            rank2: dec(r.rank2),
            eps_norm: r.eps_norm.map(dec).unwrap_or_default(),
            exceptional: r.exceptional,
            dim_v: dec(r.dim_v),
            dim_h: dec(r.dim_h),
            verdict_69: r.verdict_69,
            verdict_67: r.verdict_67,
            verdict_68: r.verdict_68,
        }
    }
}

impl ScanRow {
    pub fn pass(&self) -> bool {
        self.verdict_69 && self.verdict_67 && self.verdict_68
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanDocument {
    pub min: String,
    pub max: String,
    pub count: String,
    pub violations: String,
    pub rows: Vec<ScanRow>,
}

impl ScanDocument {
    pub fn new(min: i64, max: i64, rows: Vec<ScanRow>) -> Self {
        let violations = rows.iter().filter(|r| !r.pass()).count();
        Self { min: dec(min), max: dec(max), count: dec(rows.len()), violations: dec(violations), rows }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, doc: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)
}

/// CSV with a header row; an empty slice still writes the header.
pub fn write_csv<W: Write, T: Serialize>(w: W, header: &[&str], rows: &[T]) -> std::io::Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(header)?;
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()
}

pub const CLASSGROUP_COLUMNS: [&str; 12] = [
    "delta",
    "h",
    "h_narrow",
    "divisors",
    "rank2",
    "generators",
    "torsion_order",
    "eps_x",
    "eps_y",
    "eps_d",
    "eps_norm",
    "h0_units_order",
];
