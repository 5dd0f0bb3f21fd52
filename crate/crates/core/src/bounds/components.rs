use serde::Serialize;

use crate::cube::{closure, neighborhood, two_components, Dim, VertexSet};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentClass {
    /// A single vertex. For `d >= 3` this is equivalent to `g_i = d`.
    Isolated,
    /// Not isolated and `g_i` below the threshold.
    Small,
    Large,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentProfile {
    pub vertices: VertexSet,
    pub a: usize,
    pub g: usize,
    pub closure: usize,
    /// `g - |[A_i]|`
    pub t: usize,
    pub class: ComponentClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub d: Dim,
    pub small_threshold: u64,
    pub components: Vec<ComponentProfile>,
    /// `c(A) = Σ |[A_i]|`
    pub c_of_a: usize,
}

impl Decomposition {
    pub fn size(&self) -> usize {
        self.components.iter().map(|c| c.a).sum()
    }

    pub fn neighborhood_size(&self) -> usize {
        self.components.iter().map(|c| c.g).sum()
    }
}

pub fn default_small_threshold(d: Dim) -> u64 {
    u64::from(d.get()).pow(4)
}

/// Splits `A` into 2-components and classifies each by `g_i` alone.
/// `small_threshold` defaults to `d^4`.
pub fn classify_components(a: &VertexSet, small_threshold: Option<u64>) -> Result<Decomposition> {
    a.parity()?;
    let d = a.dim();
    let threshold = small_threshold.unwrap_or_else(|| default_small_threshold(d));
    let mut components = Vec::new();
    for part in two_components(a) {
        let g = neighborhood(&part).len();
        let closed = closure(&part)?.len();
        let class = if part.len() == 1 {
            ComponentClass::Isolated
        } else if (g as u64) < threshold {
            ComponentClass::Small
        } else {
            ComponentClass::Large
        };
        components.push(ComponentProfile {
            a: part.len(),
            vertices: part,
            g,
            closure: closed,
            t: g - closed,
            class,
        });
    }
    let c_of_a = components.iter().map(|c| c.closure).sum();
    Ok(Decomposition {
        d,
        small_threshold: threshold,
        components,
        c_of_a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(d: u32, ids: &[u32]) -> VertexSet {
        VertexSet::from_ids(Dim::new(d).unwrap(), ids.iter().copied()).unwrap()
    }

    #[test]
    fn examples() {
        let dec = classify_components(&set(3, &[0]), None).unwrap();
        assert_eq!(dec.components.len(), 1);
        let c = &dec.components[0];
        assert_eq!((c.a, c.g, c.class), (1, 3, ComponentClass::Isolated));

        let dec = classify_components(&set(3, &[0b000, 0b011]), None).unwrap();
        let c = &dec.components[0];
        assert_eq!((c.a, c.g, c.class), (2, 4, ComponentClass::Small));
        assert_eq!(dec.small_threshold, 81);

        let dec = classify_components(&set(3, &[0b000, 0b011]), Some(4)).unwrap();
        assert_eq!(dec.components[0].class, ComponentClass::Large);
    }

    #[test]
    fn antipodal_pair() {
        let dec = classify_components(&set(4, &[0, 15]), None).unwrap();
        assert_eq!(dec.components.len(), 2);
        assert!(dec
            .components
            .iter()
            .all(|c| c.class == ComponentClass::Isolated));
        assert_eq!(dec.c_of_a, 2);
        assert_eq!(dec.neighborhood_size(), 8);
    }

    #[test]
    fn d2_pair_is_not_isolated() {
        // {00, 11} has g = 2 = d but two members.
        let dec = classify_components(&set(2, &[0, 3]), None).unwrap();
        assert_eq!(dec.components[0].class, ComponentClass::Small);
    }

    #[test]
    fn mixed_parity_rejected() {
        assert!(classify_components(&set(3, &[0, 1]), None).is_err());
    }
}
