//! Compensated summation. Every multi-term reduction in the library sums in
//! a fixed order (ascending index) through these accumulators so results are
//! deterministic and insensitive to term count.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanF64 {
    sum: f64,
    comp: f64,
}

impl KahanF64 {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanC64 {
    re: KahanF64,
    im: KahanF64,
}

impl KahanC64 {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub(crate) fn kahan_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = KahanF64::default();
    for x in it {
        acc.add(x);
    }
    acc.value()
}
