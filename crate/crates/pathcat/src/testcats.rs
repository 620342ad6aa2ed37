//! Hand-built desk categories shared by unit tests. The shipped corpus files
//! reproduce these through the loader; tests for the loader compare both.

use crate::cat::{CategoryBuilder, PathCategory};

/// One commuting square, the smallest 2-graph: `ε0 = αγ0 = βδ0`.
pub fn sq1() -> PathCategory {
    let mut b = CategoryBuilder::new();
    let t = b.vertex("t");
    let p = b.vertex("p");
    let q = b.vertex("q");
    let v0 = b.vertex("v0");
    let alpha = b.arrow("alpha", p, t);
    let beta = b.arrow("beta", q, t);
    let gamma0 = b.arrow("gamma0", v0, p);
    let delta0 = b.arrow("delta0", v0, q);
    let eps0 = b.arrow("eps0", v0, t);
    b.compose(alpha, gamma0, eps0);
    b.compose(beta, delta0, eps0);
    b.build().unwrap()
}

/// Two squares over a common top: `εi = αγi = βδi`, `i = 0, 1`.
pub fn sq2() -> PathCategory {
    let mut b = CategoryBuilder::new();
    let t = b.vertex("t");
    let p = b.vertex("p");
    let q = b.vertex("q");
    let v0 = b.vertex("v0");
    let v1 = b.vertex("v1");
    let alpha = b.arrow("alpha", p, t);
    let beta = b.arrow("beta", q, t);
    for (i, v) in [(0u32, v0), (1, v1)] {
        let gamma = b.arrow(&format!("gamma{i}"), v, p);
        let delta = b.arrow(&format!("delta{i}"), v, q);
        let eps = b.arrow(&format!("eps{i}"), v, t);
        b.compose(alpha, gamma, eps);
        b.compose(beta, delta, eps);
    }
    b.build().unwrap()
}

/// A single arrow `a : v → w`.
pub fn single_arrow() -> PathCategory {
    let mut b = CategoryBuilder::new();
    let w = b.vertex("w");
    let v = b.vertex("v");
    b.arrow("a", v, w);
    b.build().unwrap()
}

/// A single vertex.
pub fn point() -> PathCategory {
    let mut b = CategoryBuilder::new();
    b.vertex("v");
    b.build().unwrap()
}
