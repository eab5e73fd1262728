/// Weighted least-squares projection of `values` onto nonincreasing
/// sequences (pool adjacent violators). `weights` must be positive.
pub fn pav_nonincreasing(values: &mut [f64], weights: &[f64]) {
    assert_eq!(values.len(), weights.len());
    // blocks of (mean, weight, length)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        blocks.push((v, w, 1));
        while blocks.len() > 1 {
            let (m2, w2, l2) = blocks[blocks.len() - 1];
            let (m1, w1, l1) = blocks[blocks.len() - 2];
            if m1 >= m2 {
                break;
            }
            blocks.pop();
            let w = w1 + w2;
            *blocks.last_mut().unwrap() = ((m1 * w1 + m2 * w2) / w, w, l1 + l2);
        }
    }
    let mut i = 0;
    for (m, _, len) in blocks {
        values[i..i + len].fill(m);
        i += len;
    }
}
