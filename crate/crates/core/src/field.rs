//! Pure scalar fields consumed by the nodal extraction.

/// A real function on the unit sphere, evaluated at unit vectors.
pub trait SphereField: Sync {
    fn eval(&self, p: [f64; 3]) -> f64;

    /// Value together with the magnitude of the parts that were summed to
    /// produce it. A value far below its magnitude is cancellation noise.
    fn eval_scaled(&self, p: [f64; 3]) -> (f64, f64) {
        let v = self.eval(p);
        (v, v.abs())
    }
}

/// A real function on the plane.
pub trait PlaneField: Sync {
    fn eval(&self, x: f64, y: f64) -> f64;

    fn eval_scaled(&self, x: f64, y: f64) -> (f64, f64) {
        let v = self.eval(x, y);
        (v, v.abs())
    }
}

/// Adapter turning a closure into a [`SphereField`].
pub struct FnSphere<F>(pub F);

impl<F: Fn([f64; 3]) -> f64 + Sync> SphereField for FnSphere<F> {
    fn eval(&self, p: [f64; 3]) -> f64 {
        (self.0)(p)
    }
}

/// Adapter turning a closure into a [`PlaneField`].
pub struct FnPlane<F>(pub F);

impl<F: Fn(f64, f64) -> f64 + Sync> PlaneField for FnPlane<F> {
    fn eval(&self, x: f64, y: f64) -> f64 {
        (self.0)(x, y)
    }
}

/// Unit vector for polar angle `theta` and azimuth `phi`. The poles are
/// returned exactly.
pub fn sphere_point(theta: f64, phi: f64) -> [f64; 3] {
    if theta == 0.0 {
        return [0.0, 0.0, 1.0];
    }
    if theta == std::f64::consts::PI {
        return [0.0, 0.0, -1.0];
    }
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Inverse of [`sphere_point`]; `phi` in `[0, 2π)`.
pub fn sphere_angles(p: [f64; 3]) -> (f64, f64) {
    let rho = p[0].hypot(p[1]);
    let theta = rho.atan2(p[2]);
    let mut phi = p[1].atan2(p[0]);
    if phi < 0.0 {
        phi += std::f64::consts::TAU;
    }
    (theta, phi)
}
