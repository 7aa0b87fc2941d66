//! Period series, pre-window trend fits and shift tests.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Discipline, LanguageGroup};
use crate::error::{Error, Result};
use crate::profile::{metric_index, FeatureRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    #[default]
    None,
    Discipline,
    LanguageGroup,
    Country,
}

impl FromStr for Grouping {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().replace('-', "_").as_str() {
            "none" | "" => Ok(Grouping::None),
            "discipline" => Ok(Grouping::Discipline),
            "language_group" => Ok(Grouping::LanguageGroup),
            "country" => Ok(Grouping::Country),
            _ => Err(format!("unknown grouping `{s}`")),
        }
    }
}

/// Which labels a series is restricted to; `None` fields match anything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupKey {
    pub discipline: Option<Discipline>,
    pub language_group: Option<LanguageGroup>,
    pub country: Option<String>,
}

impl GroupKey {
    pub fn all() -> Self {
        GroupKey::default()
    }

    pub fn of(row: &FeatureRow, grouping: Grouping) -> Self {
        let mut key = GroupKey::default();
        match grouping {
            Grouping::None => {}
            Grouping::Discipline => key.discipline = Some(row.discipline),
            Grouping::LanguageGroup => key.language_group = Some(row.language_group),
            Grouping::Country => key.country = Some(row.country.clone().unwrap_or_default()),
        }
        key
    }

    pub fn matches(&self, row: &FeatureRow) -> bool {
        self.discipline.map_or(true, |d| d == row.discipline)
            && self.language_group.map_or(true, |g| g == row.language_group)
            && self.country.as_ref().map_or(true, |c| Some(c) == row.country.as_ref() || (c.is_empty() && row.country.is_none()))
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(d) = self.discipline {
            parts.push(d.name().to_string());
        }
        if let Some(g) = self.language_group {
            parts.push(g.name().to_string());
        }
        if let Some(c) = &self.country {
            parts.push(if c.is_empty() { "unknown".to_string() } else { c.clone() });
        }
        if parts.is_empty() {
            f.write_str("all")
        } else {
            f.write_str(&parts.join("/"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub metric_name: String,
    pub group_key: GroupKey,
    pub periods: BTreeMap<u32, Vec<f64>>,
    /// Documents whose value was undefined.
    pub missing: usize,
}

impl MetricSeries {
    pub fn new(metric_name: &str, group_key: GroupKey) -> Self {
        MetricSeries {
            metric_name: metric_name.to_string(),
            group_key,
            periods: BTreeMap::new(),
            missing: 0,
        }
    }

    pub fn push(&mut self, period: u32, value: Option<f64>) {
        match value.filter(|v| v.is_finite()) {
            Some(v) => self.periods.entry(period).or_default().push(v),
            None => self.missing += 1,
        }
    }

    pub fn len(&self) -> usize {
        self.periods.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unweighted mean and document count of each non-empty period.
    pub fn period_means(&self) -> BTreeMap<u32, (f64, usize)> {
        self.periods
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(p, v)| (*p, (mean(v), v.len())))
            .collect()
    }

    fn values_in(&self, window: &RangeInclusive<u32>) -> impl Iterator<Item = (u32, &[f64])> {
        self.periods.range(window.clone()).map(|(p, v)| (*p, v.as_slice()))
    }
}

/// Values of `metric` per period over the rows matching `key`.
pub fn build_series(rows: &[FeatureRow], metric: &str, key: &GroupKey) -> Result<MetricSeries> {
    let idx = metric_index(metric)?;
    let mut series = MetricSeries::new(metric, key.clone());
    for row in rows.iter().filter(|r| key.matches(r)) {
        series.push(row.period, row.profile.values[idx]);
    }
    Ok(series)
}

/// One series per group value present in `rows`.
pub fn build_grouped(rows: &[FeatureRow], metric: &str, grouping: Grouping) -> Result<BTreeMap<GroupKey, MetricSeries>> {
    let idx = metric_index(metric)?;
    let mut out: BTreeMap<GroupKey, MetricSeries> = BTreeMap::new();
    for row in rows {
        let key = GroupKey::of(row, grouping);
        out.entry(key.clone())
            .or_insert_with(|| MetricSeries::new(metric, key))
            .push(row.period, row.profile.values[idx]);
    }
    Ok(out)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub fit_window: (u32, u32),
    pub n_periods: usize,
}

impl TrendFit {
    pub fn predict(&self, period: u32) -> f64 {
        self.intercept + self.slope * period as f64
    }
}

/// Least-squares line through the period means inside `window`.
pub fn fit_trend(series: &MetricSeries, window: RangeInclusive<u32>) -> Result<TrendFit> {
    let points: Vec<(f64, f64)> = series.values_in(&window).filter(|(_, v)| !v.is_empty()).map(|(p, v)| (p as f64, mean(v))).collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{}: {} periods with data in the fit window, 3 required",
            series.metric_name,
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(TrendFit {
        slope,
        intercept,
        r_squared,
        fit_window: (*window.start(), *window.end()),
        n_periods: points.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualLevel {
    /// One residual per document against its period's prediction.
    #[default]
    Document,
    /// One residual per period mean.
    PeriodMean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftTestResult {
    pub metric_name: String,
    pub predicted_mean: f64,
    pub observed_mean: f64,
    pub ks_stat: f64,
    pub p_value: f64,
    /// `None` when both residual pools have zero spread.
    pub cohens_d: Option<f64>,
    pub n_pre: usize,
    pub n_post: usize,
}

fn residuals(series: &MetricSeries, fit: &TrendFit, window: &RangeInclusive<u32>, level: ResidualLevel) -> Vec<f64> {
    let mut out = Vec::new();
    for (p, values) in series.values_in(window).filter(|(_, v)| !v.is_empty()) {
        let pred = fit.predict(p);
        match level {
            ResidualLevel::Document => out.extend(values.iter().map(|v| v - pred)),
            ResidualLevel::PeriodMean => out.push(mean(values) - pred),
        }
    }
    out
}

/// Compares residuals from the trend before and after the fit window.
pub fn shift_test(series: &MetricSeries, fit: &TrendFit, post: RangeInclusive<u32>, level: ResidualLevel) -> Result<ShiftTestResult> {
    let pre = fit.fit_window.0..=fit.fit_window.1;
    if post.start() <= pre.end() && pre.start() <= post.end() {
        return Err(Error::InvalidConfig(format!(
            "post window {}..={} overlaps fit window {}..={}",
            post.start(),
            post.end(),
            pre.start(),
            pre.end()
        )));
    }
    let pre_pool = residuals(series, fit, &pre, level);
    let post_pool = residuals(series, fit, &post, level);
    if pre_pool.is_empty() || post_pool.is_empty() {
        return Err(Error::InsufficientData(format!(
            "{}: {} pre-window and {} post-window residuals",
            series.metric_name,
            pre_pool.len(),
            post_pool.len()
        )));
    }
    let post_periods: Vec<(u32, &[f64])> = series.values_in(&post).filter(|(_, v)| !v.is_empty()).collect();
    let predicted_mean = post_periods.iter().map(|(p, _)| fit.predict(*p)).sum::<f64>() / post_periods.len() as f64;
    let observed: Vec<f64> = post_periods.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    let (ks_stat, p_value) = ks_two_sample(&pre_pool, &post_pool)?;
    let cohens_d = match cohens_d(&pre_pool, &post_pool) {
        Ok(d) => Some(d),
        Err(Error::UndefinedEffect | Error::InsufficientData(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ShiftTestResult {
        metric_name: series.metric_name.clone(),
        predicted_mean,
        observed_mean: mean(&observed),
        ks_stat,
        p_value,
        cohens_d,
        n_pre: pre_pool.len(),
        n_post: post_pool.len(),
    })
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("ks test needs two non-empty samples".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let n_eff = na * nb / (na + nb);
    Ok((d, kolmogorov_q(n_eff.sqrt() * d)))
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        // small-lambda form converges faster
        let c = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=20).map(|k| (-((2 * k - 1) as f64).powi(2) * c).exp()).sum();
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp()
            })
            .sum();
        2.0 * s
    };
    p.clamp(0.0, 1.0)
}

/// (mean_b - mean_a) over the pooled standard deviation.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData("cohen's d needs two values per sample".into()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled = (((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / (na + nb - 2.0)).sqrt();
    if pooled == 0.0 || !pooled.is_finite() {
        return Err(Error::UndefinedEffect);
    }
    Ok((mean(b) - mean(a)) / pooled)
}

/// Ordinals of the four quarters of `year`.
pub fn year_periods(year: i32, start_year: i32) -> RangeInclusive<u32> {
    let first = ((year - start_year) * 4) as u32;
    first..=first + 3
}

/// Signed percent change between the document-weighted means of two years.
pub fn change_rate(series: &MetricSeries, year_a: i32, year_b: i32, start_year: i32) -> Result<f64> {
    if year_a < start_year || year_b < start_year {
        return Err(Error::InvalidConfig(format!("years before the window start {start_year}")));
    }
    let annual = |year: i32| -> Result<f64> {
        let values: Vec<f64> = series.values_in(&year_periods(year, start_year)).flat_map(|(_, v)| v.iter().copied()).collect();
        if values.is_empty() {
            return Err(Error::InsufficientData(format!("{}: no values in {year}", series.metric_name)));
        }
        Ok(mean(&values))
    };
    let (ma, mb) = (annual(year_a)?, annual(year_b)?);
    if ma == 0.0 {
        return Err(Error::UndefinedRate);
    }
    Ok(100.0 * (mb - ma) / ma.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::StyleProfile;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn series(points: &[(u32, &[f64])]) -> MetricSeries {
        let mut s = MetricSeries::new("fre", GroupKey::all());
        for (p, vs) in points {
            for v in *vs {
                s.push(*p, Some(*v));
            }
        }
        s
    }

    fn brute_ks(a: &[f64], b: &[f64]) -> f64 {
        let cdf = |s: &[f64], x: f64| s.iter().filter(|v| **v <= x).count() as f64 / s.len() as f64;
        a.iter().chain(b).map(|&x| (cdf(a, x) - cdf(b, x)).abs()).fold(0.0, f64::max)
    }

    fn direct_d(a: &[f64], b: &[f64]) -> f64 {
        let m = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
        let ss = |s: &[f64]| {
            let mm = m(s);
            s.iter().map(|x| (x - mm) * (x - mm)).sum::<f64>()
        };
        let sp = ((ss(a) + ss(b)) / (a.len() + b.len() - 2) as f64).sqrt();
        (m(b) - m(a)) / sp
    }

    fn row(doc: &str, period: u32, d: Discipline, value: Option<f64>) -> FeatureRow {
        let mut profile = StyleProfile::default();
        profile.set("fre", value);
        FeatureRow {
            doc_id: doc.into(),
            period,
            discipline: d,
            language_group: LanguageGroup::Unknown,
            country: None,
            profile,
        }
    }

    #[test]
    fn series_buckets_and_missing() {
        let rows = vec![
            row("a", 0, Discipline::Physics, Some(1.0)),
            row("b", 0, Discipline::Physics, Some(2.0)),
            row("c", 0, Discipline::Mathematics, Some(3.0)),
            row("d", 1, Discipline::Mathematics, None),
        ];
        let s = build_series(&rows, "fre", &GroupKey::all()).unwrap();
        assert_eq!(s.periods[&0].len(), 3);
        assert_eq!(s.missing, 1);
        assert!(matches!(build_series(&rows, "nope", &GroupKey::all()), Err(Error::InvalidMetric(_))));

        let grouped = build_grouped(&rows, "fre", Grouping::Discipline).unwrap();
        assert_eq!(grouped.values().map(MetricSeries::len).sum::<usize>(), s.len());
        assert_eq!(grouped.values().map(|g| g.missing).sum::<usize>(), s.missing);
        let phys = GroupKey {
            discipline: Some(Discipline::Physics),
            ..Default::default()
        };
        assert_eq!(build_series(&rows, "fre", &phys).unwrap(), grouped[&phys]);
    }

    #[test]
    fn trend_exact_line_and_constant() {
        let s = series(&[(0, &[1.0, 3.0]), (1, &[4.0]), (2, &[6.0]), (3, &[8.0])]);
        let f = fit_trend(&s, 0..=3).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 2.0).abs() < 1e-12);
        assert_eq!(f.r_squared, 1.0);
        let c = series(&[(0, &[5.0]), (1, &[5.0]), (4, &[5.0])]);
        let f = fit_trend(&c, 0..=9).unwrap();
        assert_eq!((f.slope, f.intercept, f.r_squared), (0.0, 5.0, 1.0));
        assert!(matches!(fit_trend(&c, 0..=1), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn trend_matches_normal_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<(u32, f64)> = (0..36).map(|p| (p, 30.0 - 0.1 * p as f64 + rng.gen_range(-2.0..2.0))).collect();
        let mut s = MetricSeries::new("fre", GroupKey::all());
        for (p, v) in &pts {
            s.push(*p, Some(*v));
        }
        let f = fit_trend(&s, 0..=35).unwrap();
        // (X'X) beta = X'y solved by Cramer's rule
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0 as f64).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 as f64).powi(2)).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 as f64 * p.1).sum();
        let det = n * sxx - sx * sx;
        let b0 = (sy * sxx - sx * sxy) / det;
        let b1 = (n * sxy - sx * sy) / det;
        assert!((f.intercept - b0).abs() < 1e-9);
        assert!((f.slope - b1).abs() < 1e-9);
        // residuals orthogonal to the period index
        let dot: f64 = pts.iter().map(|(p, v)| (v - f.predict(*p)) * *p as f64).sum();
        assert!(dot.abs() < 1e-7);
    }

    #[test]
    fn ks_trivial_cases() {
        let a = [1.0, 2.0, 3.0];
        let (d, p) = ks_two_sample(&a, &a).unwrap();
        assert_eq!(d, 0.0);
        assert!(p > 0.999);
        let (d, _) = ks_two_sample(&a, &[10.0, 11.0]).unwrap();
        assert_eq!(d, 1.0);
        assert!(ks_two_sample(&a, &[]).is_err());
    }

    #[test]
    fn kolmogorov_branches_agree() {
        for l in [1.0, 1.1, 1.18, 1.25] {
            let c = std::f64::consts::PI.powi(2) / (8.0 * l * l);
            let small = 1.0 - (2.0 * std::f64::consts::PI).sqrt() / l * (1..=20).map(|k| (-((2 * k - 1) as f64).powi(2) * c).exp()).sum::<f64>();
            let big = 2.0 * (1..=100).map(|k| (if k % 2 == 1 { 1.0 } else { -1.0 }) * (-2.0 * (k * k) as f64 * l * l).exp()).sum::<f64>();
            assert!((small - big).abs() < 1e-12, "{l}");
        }
        // critical value at the 5% level
        assert!((kolmogorov_q(1.3581) - 0.05).abs() < 1e-4);
    }

    #[test]
    fn kolmogorov_matches_reference_values() {
        // scipy.special.kolmogorov
        let reference = [
            (0.3, 0.9999906941986655),
            (0.5, 0.9639452436648751),
            (1.0, 0.26999967167735456),
            (1.18, 0.1234538094297657),
            (1.5, 0.022217962616525127),
            (2.5, 7.453306344157342e-06),
        ];
        for (l, q) in reference {
            assert!((kolmogorov_q(l) - q).abs() < 1e-13, "{l}: {}", kolmogorov_q(l));
        }
    }

    #[test]
    fn ks_and_d_match_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a: Vec<f64> = (0..rng.gen_range(2..60)).map(|_| (rng.gen_range(0..20) as f64) / 2.0).collect();
            let b: Vec<f64> = (0..rng.gen_range(2..60)).map(|_| (rng.gen_range(0..20) as f64) / 2.0 + 1.0).collect();
            let (d, _) = ks_two_sample(&a, &b).unwrap();
            assert!((d - brute_ks(&a, &b)).abs() < 1e-12);
            if let Ok(cd) = cohens_d(&a, &b) {
                assert!((cd - direct_d(&a, &b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cohens_d_trivial() {
        assert_eq!(cohens_d(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), 0.0);
        let a = [1.0, 2.0, 3.0];
        let b = [2.0, 3.0, 4.0];
        assert!((cohens_d(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(cohens_d(&[1.0, 1.0], &[1.0, 1.0]), Err(Error::UndefinedEffect)));
        assert!(matches!(cohens_d(&[1.0], &[1.0, 2.0]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn shift_detects_injected_offset() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let noise = Normal::new(0.0, 1.0).unwrap();
        let mut s = MetricSeries::new("fre", GroupKey::all());
        for p in 0..40u32 {
            for _ in 0..200 {
                let shift = if p >= 36 { 5.0 } else { 0.0 };
                s.push(p, Some(10.0 + 0.05 * p as f64 + shift + noise.sample(&mut rng)));
            }
        }
        let fit = fit_trend(&s, 0..=35).unwrap();
        let r = shift_test(&s, &fit, 36..=39, ResidualLevel::Document).unwrap();
        assert!(r.p_value < 0.001);
        assert!((r.cohens_d.unwrap() - 5.0).abs() < 0.3);
        assert_eq!((r.n_pre, r.n_post), (7200, 800));
        assert!((r.predicted_mean - fit.predict(36) - 1.5 * fit.slope).abs() < 1e-9);

        let m = shift_test(&s, &fit, 36..=39, ResidualLevel::PeriodMean).unwrap();
        assert_eq!((m.n_pre, m.n_post), (36, 4));
        assert!(matches!(shift_test(&s, &fit, 30..=39, ResidualLevel::Document), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn shift_without_post_data_is_insufficient() {
        let s = series(&[(0, &[1.0, 2.0]), (1, &[2.0, 3.0]), (2, &[3.0, 4.0])]);
        let fit = fit_trend(&s, 0..=2).unwrap();
        assert!(matches!(shift_test(&s, &fit, 3..=6, ResidualLevel::Document), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn change_rate_cases() {
        let s = series(&[(32, &[10.0, 10.0]), (33, &[10.0]), (36, &[11.0]), (39, &[12.0, 12.0, 12.0])]);
        // 2022 mean 10, 2023 document-weighted mean 11.75
        assert!((change_rate(&s, 2022, 2023, 2014).unwrap() - 17.5).abs() < 1e-12);
        assert_eq!(change_rate(&s, 2022, 2022, 2014).unwrap(), 0.0);
        let z = series(&[(32, &[0.0]), (36, &[1.0])]);
        assert!(matches!(change_rate(&z, 2022, 2023, 2014), Err(Error::UndefinedRate)));
        assert!(matches!(change_rate(&z, 2020, 2023, 2014), Err(Error::InsufficientData(_))));
    }

    fn sample() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-50.0f64..50.0, 2..40)
    }

    proptest! {
        #[test]
        fn ks_invariant_under_monotone_maps(a in sample(), b in sample()) {
            let f = |v: &[f64]| v.iter().map(|x| x.exp() / (1.0 + x.exp()) * 3.0 + x.powi(3)).collect::<Vec<_>>();
            let (d1, _) = ks_two_sample(&a, &b).unwrap();
            let (d2, _) = ks_two_sample(&f(&a), &f(&b)).unwrap();
            prop_assert!((d1 - d2).abs() < 1e-12);
        }

        #[test]
        fn d_affine_invariant(a in sample(), b in sample(), scale in 0.1f64..10.0, shift in -100.0f64..100.0) {
            if let Ok(d) = cohens_d(&a, &b) {
                let t = |v: &[f64]| v.iter().map(|x| scale * x + shift).collect::<Vec<_>>();
                let dt = cohens_d(&t(&a), &t(&b)).unwrap();
                prop_assert!((d - dt).abs() < 1e-9 * d.abs().max(1.0));
                let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
                let dn = cohens_d(&neg(&a), &neg(&b)).unwrap();
                prop_assert!((d + dn).abs() < 1e-9 * d.abs().max(1.0));
            }
        }

        #[test]
        fn change_rate_scale_invariant(a in sample(), b in sample(), c in 0.01f64..100.0) {
            let s1 = series(&[(32, &a), (36, &b)]);
            let scaled: (Vec<f64>, Vec<f64>) = (a.iter().map(|x| x * c).collect(), b.iter().map(|x| x * c).collect());
            let s2 = series(&[(32, &scaled.0), (36, &scaled.1)]);
            if let (Ok(r1), Ok(r2)) = (change_rate(&s1, 2022, 2023, 2014), change_rate(&s2, 2022, 2023, 2014)) {
                prop_assert!((r1 - r2).abs() < 1e-6 * r1.abs().max(1.0));
            }
        }

        #[test]
        fn p_value_in_unit_interval(a in sample(), b in sample()) {
            let (d, p) = ks_two_sample(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&d) && (0.0..=1.0).contains(&p));
        }
    }
}
