//! Size caps shared by the constructors. Each cap can be overridden with an
//! environment variable so that large experiments can be run deliberately.

use std::sync::OnceLock;

/// Tunable limits. Read once from the environment on first access.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Caps {
    /// Largest explicit space whose triangle inequality is checked exhaustively.
    pub validation: usize,
    /// Largest point count an explicit distance matrix may hold.
    pub explicit_points: usize,
    /// Largest Hamming cube dimension that may be materialized.
    pub cube_dim: u32,
    /// Largest product space (point count).
    pub product_points: usize,
    /// Largest number of paths (`n^(t+1)`) enumerated in exact mode.
    pub exact_paths: u128,
    /// Largest Laakso level.
    pub laakso_level: u32,
    /// Largest horizon of the (S, M) lattice dynamic program.
    pub pitman_horizon: usize,
    /// Largest depth of the explicit binary tree chain.
    pub explicit_tree_depth: u32,
    /// Largest point count for the O(n^4) hyperbolicity scan.
    pub delta_points: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            validation: 2000,
            explicit_points: 20_000,
            cube_dim: 14,
            product_points: 1 << 20,
            exact_paths: 1_000_000,
            laakso_level: 6,
            pitman_horizon: 5000,
            explicit_tree_depth: 12,
            delta_points: 400,
        }
    }
}

fn env_or<T: std::str::FromStr>(name: &str, default: T) -> T {
    std::env::var(name)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

impl Caps {
    /// Defaults with `MTLAB_*` environment overrides applied.
    pub fn from_env() -> Self {
        let d = Caps::default();
        Caps {
            validation: env_or("MTLAB_VALIDATION_CAP", d.validation),
            explicit_points: env_or("MTLAB_EXPLICIT_CAP", d.explicit_points),
            cube_dim: env_or("MTLAB_CUBE_CAP", d.cube_dim),
            product_points: env_or("MTLAB_PRODUCT_CAP", d.product_points),
            exact_paths: env_or("MTLAB_EXACT_PATH_CAP", d.exact_paths),
            laakso_level: env_or("MTLAB_LAAKSO_CAP", d.laakso_level),
            pitman_horizon: env_or("MTLAB_PITMAN_CAP", d.pitman_horizon),
            explicit_tree_depth: env_or("MTLAB_TREE_DEPTH_CAP", d.explicit_tree_depth),
            delta_points: env_or("MTLAB_DELTA_CAP", d.delta_points),
        }
    }
}

/// Process-wide caps.
pub fn caps() -> &'static Caps {
    static CAPS: OnceLock<Caps> = OnceLock::new();
    CAPS.get_or_init(Caps::from_env)
}

/// Additive slack for an inequality `lhs <= rhs`: `1e-9` scaled by the
/// largest magnitude involved (never below `1e-9`).
pub fn slack(lhs: f64, rhs: f64) -> f64 {
    1e-9 * lhs.abs().max(rhs.abs()).max(1.0)
}

/// `lhs <= rhs` up to [`slack`].
pub fn le_with_slack(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + slack(lhs, rhs)
}
