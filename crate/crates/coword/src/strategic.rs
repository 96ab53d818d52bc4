//! Strategic diagrams: Callon centrality and density, quadrant placement,
//! field-level categories, and the circular quadrant trajectory.
//!
//! Centrality (10 * sum of external equivalence weights) measures how much
//! a theme interacts with the rest of the field; density (100 * internal
//! equivalence sum / keyword count) measures how developed it is
//! internally. Themes split into four quadrants around a data-derived
//! origin: motor (central, developed), basic (central, undeveloped),
//! niche (peripheral, developed) and emerging or declining (peripheral,
//! undeveloped).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cluster::{theme_doc_count, DocCountMode, Theme};
use crate::norm::KeywordIndex;

/// Quadrants of the strategic diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quadrant {
    /// Motor themes: central and developed.
    Q1,
    /// Basic themes: central, not yet developed.
    Q2,
    /// Niche themes: peripheral but well developed.
    Q3,
    /// Emerging or declining themes: peripheral and undeveloped.
    Q4,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4];

    /// Reader-facing name of the quadrant's theme class.
    pub fn descriptor(self) -> &'static str {
        match self {
            Quadrant::Q1 => "motor",
            Quadrant::Q2 => "basic",
            Quadrant::Q3 => "niche",
            Quadrant::Q4 => "emerging",
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quadrant::Q1 => write!(f, "Q1"),
            Quadrant::Q2 => write!(f, "Q2"),
            Quadrant::Q3 => write!(f, "Q3"),
            Quadrant::Q4 => write!(f, "Q4"),
        }
    }
}

/// Field-level structure read off the quadrant distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldCategory {
    /// Mass on the first bisector (Q1 + Q4): a developed core with a
    /// fringe of peripheral themes.
    Cat1,
    /// Mass on the second bisector (Q2 + Q3): a field still structuring
    /// itself, polycentric, few consolidated themes.
    Cat2,
    /// Spread across all quadrants: a consolidated, rich structure.
    Cat3,
}

impl fmt::Display for FieldCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCategory::Cat1 => write!(f, "Cat1"),
            FieldCategory::Cat2 => write!(f, "Cat2"),
            FieldCategory::Cat3 => write!(f, "Cat3"),
        }
    }
}

/// How the diagram origin is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginMode {
    /// Componentwise median of the theme metrics (default; robust to the
    /// heavy-tailed centralities real corpora produce).
    Median,
    /// Componentwise arithmetic mean.
    Mean,
    /// A fixed origin supplied by the caller.
    Explicit { centrality: f64, density: f64 },
}

impl OriginMode {
    pub fn name(&self) -> &'static str {
        match self {
            OriginMode::Median => "median",
            OriginMode::Mean => "mean",
            OriginMode::Explicit { .. } => "explicit",
        }
    }
}

/// Per-theme placement in the diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThemeMetrics {
    pub theme_id: usize,
    pub centrality: f64,
    pub density: f64,
    pub quadrant: Quadrant,
}

/// Themes with their metrics, the axis origin, and the field category.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategicMap {
    /// Ordered by document count descending, then label ascending.
    pub themes: Vec<(Theme, ThemeMetrics)>,
    pub origin: (f64, f64),
    pub origin_mode: OriginMode,
    pub category: FieldCategory,
    pub quadrant_counts: BTreeMap<Quadrant, u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("cannot derive a strategic map origin from zero themes")]
    EmptyMap,
}

/// Default dominance fraction for [`classify_category`].
pub const DEFAULT_DOMINANCE: f64 = 2.0 / 3.0;

/// Callon centrality: 10 * sum of external equivalence weights.
pub fn callon_centrality(theme: &Theme) -> f64 {
    10.0 * theme.external_strength
}

/// Callon density: 100 * (sum of internal equivalence weights / number of
/// member keywords). The divisor is the keyword count, not the edge count.
pub fn callon_density(theme: &Theme) -> f64 {
    if theme.members.is_empty() {
        return 0.0;
    }
    100.0 * theme.internal_strength() / theme.members.len() as f64
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Derives the diagram origin from (centrality, density) points.
pub fn compute_origin(points: &[(f64, f64)], mode: OriginMode) -> Result<(f64, f64), MapError> {
    match mode {
        OriginMode::Explicit {
            centrality,
            density,
        } => Ok((centrality, density)),
        OriginMode::Median => {
            if points.is_empty() {
                return Err(MapError::EmptyMap);
            }
            let mut cs: Vec<f64> = points.iter().map(|p| p.0).collect();
            let mut ds: Vec<f64> = points.iter().map(|p| p.1).collect();
            Ok((median(&mut cs), median(&mut ds)))
        }
        OriginMode::Mean => {
            if points.is_empty() {
                return Err(MapError::EmptyMap);
            }
            let n = points.len() as f64;
            let c = points.iter().map(|p| p.0).sum::<f64>() / n;
            let d = points.iter().map(|p| p.1).sum::<f64>() / n;
            Ok((c, d))
        }
    }
}

/// Places a (centrality, density) point relative to the origin. Points on
/// an axis go right/up: the boundary rule is `>=`.
pub fn classify_quadrant(metrics: (f64, f64), origin: (f64, f64)) -> Quadrant {
    let right = metrics.0 >= origin.0;
    let top = metrics.1 >= origin.1;
    match (right, top) {
        (true, true) => Quadrant::Q1,
        (true, false) => Quadrant::Q2,
        (false, true) => Quadrant::Q3,
        (false, false) => Quadrant::Q4,
    }
}

/// Classifies the field from quadrant counts `[Q1, Q2, Q3, Q4]`.
///
/// First-bisector dominance (Q1 + Q4 holding at least the dominance
/// fraction of themes) wins over second-bisector dominance (Q2 + Q3);
/// anything else is a consolidated spread.
pub fn classify_category(counts: [u64; 4], dominance: f64) -> FieldCategory {
    let total = counts.iter().sum::<u64>() as f64;
    let first_bisector = (counts[0] + counts[3]) as f64;
    let second_bisector = (counts[1] + counts[2]) as f64;
    if first_bisector >= dominance * total {
        FieldCategory::Cat1
    } else if second_bisector >= dominance * total {
        FieldCategory::Cat2
    } else {
        FieldCategory::Cat3
    }
}

/// The expected next stop in the circular quadrant trajectory: themes are
/// born emerging (Q4), become basic (Q2), then motor (Q1), and end their
/// run as niche themes (Q3).
pub fn predict_trajectory(quadrant: Quadrant) -> Option<Quadrant> {
    match quadrant {
        Quadrant::Q4 => Some(Quadrant::Q2),
        Quadrant::Q2 => Some(Quadrant::Q1),
        Quadrant::Q1 => Some(Quadrant::Q3),
        Quadrant::Q3 => None,
    }
}

/// Assembles the strategic map: metrics for every theme, the origin,
/// quadrant assignments and counts, and the field category. Theme document
/// counts are filled from the index under `doc_count_mode`.
pub fn build_strategic_map(
    themes: Vec<Theme>,
    index: &KeywordIndex,
    origin_mode: OriginMode,
    doc_count_mode: DocCountMode,
) -> Result<StrategicMap, MapError> {
    if themes.is_empty() {
        return Err(MapError::EmptyMap);
    }

    let mut entries: Vec<(Theme, ThemeMetrics)> = themes
        .into_iter()
        .map(|mut theme| {
            theme.doc_count = theme_doc_count(&theme, index, doc_count_mode);
            let metrics = ThemeMetrics {
                theme_id: theme.id,
                centrality: callon_centrality(&theme),
                density: callon_density(&theme),
                quadrant: Quadrant::Q1, // placed below once the origin is known
            };
            (theme, metrics)
        })
        .collect();

    let points: Vec<(f64, f64)> = entries
        .iter()
        .map(|(_, m)| (m.centrality, m.density))
        .collect();
    let origin = compute_origin(&points, origin_mode)?;

    let mut quadrant_counts: BTreeMap<Quadrant, u64> =
        Quadrant::ALL.iter().map(|&q| (q, 0)).collect();
    for (_, metrics) in entries.iter_mut() {
        metrics.quadrant = classify_quadrant((metrics.centrality, metrics.density), origin);
        *quadrant_counts
            .get_mut(&metrics.quadrant)
            .expect("all quadrants present") += 1;
    }

    let counts = [
        quadrant_counts[&Quadrant::Q1],
        quadrant_counts[&Quadrant::Q2],
        quadrant_counts[&Quadrant::Q3],
        quadrant_counts[&Quadrant::Q4],
    ];
    let category = classify_category(counts, DEFAULT_DOMINANCE);

    entries.sort_by(|a, b| {
        b.0.doc_count
            .cmp(&a.0.doc_count)
            .then_with(|| a.0.label.cmp(&b.0.label))
    });

    Ok(StrategicMap {
        themes: entries,
        origin,
        origin_mode,
        category,
        quadrant_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{simple_centers, ClusterParams};
    use crate::net::build_network;
    use crate::norm::{build_index, KeywordField, NormalizationRules};
    use crate::testutil::mini_corpus;

    /// Printed (centrality, density) pairs of the twelve reference themes
    /// used in the origin and classification tests.
    pub(crate) const TWELVE_THEMES: [(f64, f64); 12] = [
        (3.6, 19.25),
        (1.5, 24.0),
        (0.9, 25.0),
        (0.7, 23.0),
        (0.75, 27.7),
        (0.35, 39.0),
        (0.22, 26.8),
        (0.24, 21.5),
        (0.11, 18.6),
        (0.26, 25.0),
        (0.0, 25.0),
        (0.075, 16.6),
    ];

    fn mini_map() -> StrategicMap {
        let index = build_index(
            &mini_corpus(),
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        let network = build_network(&index, 2);
        let params = ClusterParams {
            min_theme_size: 2,
            max_theme_size: 3,
            max_themes: None,
        };
        let (themes, _) = simple_centers(&network, &params);
        build_strategic_map(themes, &index, OriginMode::Median, DocCountMode::AnyMember).unwrap()
    }

    #[test]
    fn centrality_and_density_on_mini_themes() {
        let map = mini_map();
        // Ordered by doc count: the 5-document theme first.
        let (theme_b, metrics_b) = &map.themes[0];
        let (theme_a, metrics_a) = &map.themes[1];
        assert_eq!(theme_b.label, "ethics");
        assert_eq!(theme_a.label, "chatgpt");
        assert!((metrics_a.centrality - 2.5).abs() < 1e-12);
        assert!((metrics_b.centrality - 2.5).abs() < 1e-12);
        assert!((metrics_a.density - 50.0).abs() < 1e-12);
        assert!((metrics_b.density - 37.04).abs() < 0.01);
    }

    #[test]
    fn mini_map_origin_and_quadrants() {
        let map = mini_map();
        assert!((map.origin.0 - 2.5).abs() < 1e-12);
        assert!((map.origin.1 - 43.52).abs() < 0.01);
        assert_eq!(map.themes[0].1.quadrant, Quadrant::Q2);
        assert_eq!(map.themes[1].1.quadrant, Quadrant::Q1);
        assert_eq!(map.themes[0].0.doc_count, 5);
        assert_eq!(map.themes[1].0.doc_count, 2);
    }

    #[test]
    fn zero_external_theme_has_zero_centrality() {
        let theme = Theme {
            id: 0,
            members: std::collections::BTreeMap::from([
                ("assessment".to_owned(), 4),
                ("evaluation".to_owned(), 3),
                ("rubric".to_owned(), 3),
            ]),
            label: "assessment".to_owned(),
            internal_edges: std::collections::BTreeMap::new(),
            external_strength: 0.0,
            doc_count: 8,
            freq_sum: 10,
        };
        assert_eq!(callon_centrality(&theme), 0.0);
        // No internal edges either, so density is zero too.
        assert_eq!(callon_density(&theme), 0.0);
    }

    #[test]
    fn density_divides_by_keyword_count() {
        let map = mini_map();
        let (theme_a, metrics_a) = &map.themes[1];
        // Two keywords, one internal edge of weight 1.0.
        assert_eq!(theme_a.size(), 2);
        assert!((metrics_a.density - 100.0 * 1.0 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn median_origin_of_twelve_reference_themes() {
        let origin = compute_origin(&TWELVE_THEMES, OriginMode::Median).unwrap();
        assert!((origin.0 - 0.305).abs() < 1e-9);
        assert!((origin.1 - 24.5).abs() < 1e-9);
    }

    #[test]
    fn twelve_reference_themes_classify_per_the_boundary_rule() {
        // Hand classification of the reference metrics against their own
        // median origin. The analytic rule yields a 3/3/3/3 split (hence
        // Cat3), not the narrative 1/5/4/2 placement those metrics are
        // usually quoted with; the printed values and the narrative are
        // not mutually consistent under any single origin.
        let origin = compute_origin(&TWELVE_THEMES, OriginMode::Median).unwrap();
        let expected = [
            Quadrant::Q2, // (3.6, 19.25)
            Quadrant::Q2, // (1.5, 24)
            Quadrant::Q1, // (0.9, 25)
            Quadrant::Q2, // (0.7, 23)
            Quadrant::Q1, // (0.75, 27.7)
            Quadrant::Q1, // (0.35, 39)
            Quadrant::Q3, // (0.22, 26.8)
            Quadrant::Q4, // (0.24, 21.5)
            Quadrant::Q4, // (0.11, 18.6)
            Quadrant::Q3, // (0.26, 25)
            Quadrant::Q3, // (0, 25)
            Quadrant::Q4, // (0.075, 16.6)
        ];
        let mut counts = [0u64; 4];
        for (point, want) in TWELVE_THEMES.iter().zip(expected) {
            let got = classify_quadrant(*point, origin);
            assert_eq!(got, want, "point {point:?}");
            counts[got as usize] += 1;
        }
        assert_eq!(counts, [3, 3, 3, 3]);
        assert_eq!(
            classify_category(counts, DEFAULT_DOMINANCE),
            FieldCategory::Cat3
        );
    }

    #[test]
    fn mean_origin_of_twelve_reference_themes() {
        let origin = compute_origin(&TWELVE_THEMES, OriginMode::Mean).unwrap();
        assert!((origin.0 - 0.725416).abs() < 1e-3);
        assert!((origin.1 - 24.2875).abs() < 1e-9);
    }

    #[test]
    fn single_point_median_is_itself() {
        let origin = compute_origin(&[(1.5, 30.0)], OriginMode::Median).unwrap();
        assert_eq!(origin, (1.5, 30.0));
    }

    #[test]
    fn empty_points_error_for_derived_origins() {
        assert_eq!(
            compute_origin(&[], OriginMode::Median),
            Err(MapError::EmptyMap)
        );
        assert_eq!(
            compute_origin(&[], OriginMode::Mean),
            Err(MapError::EmptyMap)
        );
        let explicit = OriginMode::Explicit {
            centrality: 1.0,
            density: 2.0,
        };
        assert_eq!(compute_origin(&[], explicit), Ok((1.0, 2.0)));
    }

    #[test]
    fn quadrant_classification_with_boundary_rule() {
        let origin = (0.305, 24.5);
        assert_eq!(classify_quadrant((0.9, 25.0), origin), Quadrant::Q1);
        assert_eq!(classify_quadrant((0.11, 18.6), origin), Quadrant::Q4);
        assert_eq!(classify_quadrant((1.5, 24.0), origin), Quadrant::Q2);
        assert_eq!(classify_quadrant((0.0, 25.0), origin), Quadrant::Q3);
        // Exactly on the origin: >= sends it right and up.
        assert_eq!(classify_quadrant(origin, origin), Quadrant::Q1);
    }

    #[test]
    fn category_verdicts() {
        assert_eq!(
            classify_category([1, 5, 4, 2], DEFAULT_DOMINANCE),
            FieldCategory::Cat2
        );
        assert_eq!(
            classify_category([3, 0, 0, 3], DEFAULT_DOMINANCE),
            FieldCategory::Cat1
        );
        assert_eq!(
            classify_category([3, 3, 3, 3], DEFAULT_DOMINANCE),
            FieldCategory::Cat3
        );
    }

    #[test]
    fn trajectory_cycle() {
        assert_eq!(predict_trajectory(Quadrant::Q4), Some(Quadrant::Q2));
        assert_eq!(predict_trajectory(Quadrant::Q2), Some(Quadrant::Q1));
        assert_eq!(predict_trajectory(Quadrant::Q1), Some(Quadrant::Q3));
        assert_eq!(predict_trajectory(Quadrant::Q3), None);
        // Three hops from birth to terminal.
        let mut q = Quadrant::Q4;
        for _ in 0..3 {
            q = predict_trajectory(q).unwrap();
        }
        assert_eq!(q, Quadrant::Q3);
        assert_eq!(predict_trajectory(q), None);
    }

    #[test]
    fn single_theme_sits_at_origin_in_q1() {
        let index = build_index(
            &mini_corpus(),
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        let network = build_network(&index, 2);
        let params = ClusterParams {
            min_theme_size: 3,
            max_theme_size: 3,
            max_themes: None,
        };
        let (themes, _) = simple_centers(&network, &params);
        let map = build_strategic_map(themes, &index, OriginMode::Median, DocCountMode::AnyMember)
            .unwrap();
        assert_eq!(map.themes.len(), 1);
        let metrics = map.themes[0].1;
        assert_eq!(map.origin, (metrics.centrality, metrics.density));
        assert_eq!(metrics.quadrant, Quadrant::Q1);
        assert_eq!(map.category, FieldCategory::Cat1);
    }

    #[test]
    fn empty_theme_list_is_empty_map_error() {
        let index = build_index(
            &mini_corpus(),
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        let err = build_strategic_map(
            Vec::new(),
            &index,
            OriginMode::Median,
            DocCountMode::AnyMember,
        );
        assert_eq!(err.unwrap_err(), MapError::EmptyMap);
    }

    #[test]
    fn zero_external_theme_lands_peripheral() {
        // With distinct centralities and any other theme interacting, a
        // theme without external links sits left of a median or mean
        // origin, so in Q3 or Q4.
        let make_theme = |id: usize, name: &str, external: f64| Theme {
            id,
            members: std::collections::BTreeMap::from([
                (format!("{name} a"), 3),
                (format!("{name} b"), 3),
            ]),
            label: format!("{name} a"),
            internal_edges: std::collections::BTreeMap::from([(
                crate::net::TermPair::new(format!("{name} a"), format!("{name} b")),
                0.2 + id as f64 * 0.1,
            )]),
            external_strength: external,
            doc_count: 0,
            freq_sum: 6,
        };
        let themes = vec![
            make_theme(0, "silent", 0.0),
            make_theme(1, "busy", 0.15),
            make_theme(2, "busier", 0.3),
        ];
        let index = KeywordIndex::default();
        for mode in [OriginMode::Median, OriginMode::Mean] {
            let map =
                build_strategic_map(themes.clone(), &index, mode, DocCountMode::AnyMember).unwrap();
            let (_, metrics) = map
                .themes
                .iter()
                .find(|(t, _)| t.label == "silent a")
                .expect("zero-external theme present");
            assert!(
                metrics.quadrant == Quadrant::Q3 || metrics.quadrant == Quadrant::Q4,
                "got {} under {mode:?}",
                metrics.quadrant
            );
        }
    }

    #[test]
    fn quadrant_counts_sum_to_theme_count() {
        let map = mini_map();
        let total: u64 = map.quadrant_counts.values().sum();
        assert_eq!(total as usize, map.themes.len());
    }

    #[test]
    fn freq_sum_doc_count_mode_orders_by_freq_sum() {
        let index = build_index(
            &mini_corpus(),
            KeywordField::Author,
            &NormalizationRules::standard(),
        );
        let network = build_network(&index, 2);
        let params = ClusterParams {
            min_theme_size: 2,
            max_theme_size: 3,
            max_themes: None,
        };
        let (themes, _) = simple_centers(&network, &params);
        let map =
            build_strategic_map(themes, &index, OriginMode::Median, DocCountMode::FreqSum).unwrap();
        assert_eq!(map.themes[0].0.doc_count, 10);
        assert_eq!(map.themes[1].0.doc_count, 4);
    }
}
