//! Random approximation systems that are valid on a given set of models.

use rand::Rng;

use crate::satisfaction::{hsat, ApproximationSystem, SatError};
use crate::syntax::Formula;
use crate::wpm::WeakProbModel;

/// Builds a system over `sentences` plus `weakenings` extra disjunctions.
///
/// Random edges are kept only when no model satisfies the source without
/// the target; the transitive closure of such edges keeps that property.
/// Each weakening `φ \/ ψ` is approximated by `φ`.
pub fn random_valid_system(
    rng: &mut impl Rng,
    mut sentences: Vec<Formula>,
    models: &[WeakProbModel],
    edges: usize,
    weakenings: usize,
) -> Result<ApproximationSystem, SatError> {
    let base = sentences.len();
    let mut rel = Vec::new();
    if base > 0 {
        for _ in 0..weakenings {
            let (i, j) = (rng.gen_range(0..base), rng.gen_range(0..base));
            sentences.push(Formula::or(sentences[i].clone(), sentences[j].clone()));
            rel.push((i, sentences.len() - 1));
        }
    }
    let sat: Vec<Vec<bool>> =
        models.iter().map(|m| sentences.iter().map(|s| hsat(s, m)).collect::<Result<_, _>>()).collect::<Result<_, _>>()?;
    let n = sentences.len();
    if n > 0 {
        for _ in 0..edges {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if sat.iter().all(|row| !row[i] || row[j]) {
                rel.push((i, j));
            }
        }
    }
    let sys = ApproximationSystem::new(sentences, rel).expect("indices in range");
    Ok(sys.transitive_closure())
}
