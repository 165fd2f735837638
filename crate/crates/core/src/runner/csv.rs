//! CSV renderings of traces, decay curves and grids.

use crate::benchmarking::{CharacterData, DecayCurve};
use crate::experiments::{AllxyResult, ChevronMap, PhaseScan, TimeTrace};
use crate::noise::ConfusionMatrix;
use crate::Result;

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| crate::Error::Record(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn record<I, S>(w: &mut csv::Writer<Vec<u8>>, row: I) -> Result<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    w.write_record(row).map_err(|e| crate::Error::Record(e.to_string()))
}

fn shots_field(shots: Option<u64>) -> String {
    shots.map_or_else(|| "exact".to_string(), |n| n.to_string())
}

/// `t_s,mean,std,shots`.
pub fn trace_csv(trace: &TimeTrace) -> Result<String> {
    let mut w = writer();
    record(&mut w, ["t_s", "mean", "std", "shots"])?;
    for ((t, m), s) in trace.times_s.iter().zip(&trace.signal).zip(&trace.std) {
        record(&mut w, [t.to_string(), m.to_string(), s.to_string(), shots_field(trace.shots)])?;
    }
    finish(w)
}

/// `depth,mean,std,sequences,shots`.
pub fn rb_csv(curve: &DecayCurve) -> Result<String> {
    let mut w = writer();
    record(&mut w, ["depth", "mean", "std", "sequences", "shots"])?;
    for (i, d) in curve.depths.iter().enumerate() {
        record(
            &mut w,
            [
                d.to_string(),
                curve.mean[i].to_string(),
                curve.std[i].to_string(),
                curve.per_sequence[i].len().to_string(),
                shots_field(curve.shots),
            ],
        )?;
    }
    finish(w)
}

/// `variant,depth,p00,p01,p10,p11,char_1,char_2,char_12`.
pub fn characters_csv(sets: &[&CharacterData]) -> Result<String> {
    let mut w = writer();
    record(&mut w, ["variant", "depth", "p00", "p01", "p10", "p11", "char_1", "char_2", "char_12"])?;
    for data in sets {
        let variant = if data.interleaved { "interleaved" } else { "reference" };
        for (i, d) in data.depths.iter().enumerate() {
            let mut row = vec![variant.to_string(), d.to_string()];
            row.extend(data.mean[i].iter().map(f64::to_string));
            row.extend(data.characters[i].iter().map(f64::to_string));
            record(&mut w, row)?;
        }
    }
    finish(w)
}

/// Rows are detunings, columns pulse lengths; the header row carries the
/// lengths in seconds.
pub fn chevron_csv(map: &ChevronMap) -> Result<String> {
    let mut w = writer();
    let mut header = vec!["detuning_hz\\t_s".to_string()];
    header.extend(map.durations_s.iter().map(f64::to_string));
    record(&mut w, header)?;
    for (d, row) in map.detunings_hz.iter().zip(&map.probability) {
        let mut r = vec![d.to_string()];
        r.extend(row.iter().map(f64::to_string));
        record(&mut w, r)?;
    }
    finish(w)
}

/// `pair,measured,ideal`.
pub fn allxy_csv(r: &AllxyResult) -> Result<String> {
    let mut w = writer();
    record(&mut w, ["pair", "measured", "ideal"])?;
    for ((l, v), i) in r.labels.iter().zip(&r.values).zip(&r.ideal) {
        record(&mut w, [l.clone(), v.to_string(), i.to_string()])?;
    }
    finish(w)
}

/// `target,control_state,theta,p1`.
pub fn phase_scans_csv(scans: &[PhaseScan]) -> Result<String> {
    let mut w = writer();
    record(&mut w, ["target", "control_state", "theta", "p1"])?;
    for s in scans {
        for (t, p) in s.thetas.iter().zip(&s.p1) {
            record(&mut w, [s.target.to_string(), s.control_state.to_string(), t.to_string(), p.to_string()])?;
        }
    }
    finish(w)
}

/// `prepared,r00,r01,r10,r11`.
pub fn confusion_csv(a: &ConfusionMatrix) -> Result<String> {
    let mut w = writer();
    record(&mut w, ["prepared", "r00", "r01", "r10", "r11"])?;
    for (i, row) in a.rows().iter().enumerate() {
        let mut r = vec![format!("{:02b}", i)];
        r.extend(row.iter().map(f64::to_string));
        record(&mut w, r)?;
    }
    finish(w)
}

/// Real and imaginary parts of a 4x4 matrix, one entry per row.
pub fn density_csv(rho: &crate::algebra::DensityMatrix) -> Result<String> {
    let mut w = writer();
    record(&mut w, ["row", "col", "re", "im"])?;
    let m = rho.matrix();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            record(&mut w, [format!("{:02b}", i), format!("{:02b}", j), m[(i, j)].re.to_string(), m[(i, j)].im.to_string()])?;
        }
    }
    finish(w)
}
