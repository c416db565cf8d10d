/// Projects `g` so it does not oppose `g_ref`.
///
/// Returns `g` unchanged when `g·g_ref ≥ 0` or when `g_ref` is zero,
/// otherwise `g − (g·g_ref / ‖g_ref‖²)·g_ref`.
pub fn agem_project(g: &[f64], g_ref: &[f64]) -> Vec<f64> {
    assert_eq!(g.len(), g_ref.len(), "gradient lengths differ");
    let dot = dot(g, g_ref);
    let nn = dot_self(g_ref);
    if dot >= 0.0 || nn == 0.0 {
        return g.to_vec();
    }
    let c = dot / nn;
    g.iter().zip(g_ref).map(|(a, b)| a - c * b).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_self(a: &[f64]) -> f64 {
    dot(a, a)
}
