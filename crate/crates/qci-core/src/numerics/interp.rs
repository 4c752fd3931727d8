//! Cubic (4-point Lagrange) interpolation on uniform grids.

/// Samples `values[i]` live at `x0 + i·h`. Evaluation clamps the stencil at
/// the ends, so the caller is responsible for domain checks.
#[derive(Debug, Clone)]
pub struct UniformCubic {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl UniformCubic {
    pub fn new(x0: f64, h: f64, values: Vec<f64>) -> Self {
        assert!(h > 0.0 && values.len() >= 2);
        Self { x0, h, values }
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.h * (self.values.len() - 1) as f64
    }

    /// Cubic Lagrange interpolation through the 4 nearest samples.
    pub fn eval(&self, x: f64) -> f64 {
        cubic_uniform(self.x0, self.h, &self.values, x)
    }
}

/// Cubic Lagrange interpolation on a uniform grid, free-function form.
pub fn cubic_uniform(x0: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    if n < 4 {
        // Fall back to linear for stub grids.
        let t = ((x - x0) / h).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let f = t - i as f64;
        return values[i] * (1.0 - f) + values[i + 1] * f;
    }
    let t = (x - x0) / h;
    // Stencil start so that x lies between the 2nd and 3rd points.
    let i = ((t.floor() as isize) - 1).clamp(0, n as isize - 4) as usize;
    let s = t - i as f64; // in [~1, ~2] inside the grid
    let f = &values[i..i + 4];
    // Lagrange basis on nodes 0,1,2,3.
    let l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    f[0] * l0 + f[1] * l1 + f[2] * l2 + f[3] * l3
}
