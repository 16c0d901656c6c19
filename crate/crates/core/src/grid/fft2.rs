//! Row/column 2D FFT on a contiguous row-major field, built on rustfft.
//! Rows (the fast axis) are transformed in place, then the field is
//! transposed, transformed again, and transposed back. Row batches run on
//! the rayon pool; each row is independent so results are bit-reproducible
//! regardless of thread count.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

pub struct Fft2d {
    nx: usize,
    ny: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    transpose_buf: Vec<C64>,
}

impl Fft2d {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            ny,
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
            transpose_buf: vec![C64::new(0.0, 0.0); nx * ny],
        }
    }

    /// Unnormalized forward transform of `field` (row-major, x slow, y fast).
    pub fn forward(&mut self, field: &mut [C64]) {
        self.pass(field, true);
    }

    /// Unnormalized inverse transform; caller folds the 1/(nx ny) scale into
    /// its own spectral multipliers.
    pub fn inverse(&mut self, field: &mut [C64]) {
        self.pass(field, false);
    }

    fn pass(&mut self, field: &mut [C64], forward: bool) {
        let (nx, ny) = (self.nx, self.ny);
        debug_assert_eq!(field.len(), nx * ny);
        let fft_y = if forward { &self.fwd_y } else { &self.inv_y };
        let fft_x = if forward { &self.fwd_x } else { &self.inv_x };

        run_rows(field, ny, fft_y);
        transpose(field, &mut self.transpose_buf, nx, ny);
        run_rows(&mut self.transpose_buf, nx, fft_x);
        transpose(&self.transpose_buf, field, ny, nx);
    }
}

fn run_rows(field: &mut [C64], row_len: usize, fft: &Arc<dyn Fft<f64>>) {
    let scratch_len = fft.get_inplace_scratch_len();
    field
        .par_chunks_mut(row_len)
        .for_each_init(
            || vec![C64::new(0.0, 0.0); scratch_len],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
}

/// out[j * rows + i] = input[i * cols + j] for an input with `rows` rows of
/// length `cols`.
fn transpose(input: &[C64], out: &mut [C64], rows: usize, cols: usize) {
    const BLOCK: usize = 32;
    out.par_chunks_mut(rows * BLOCK.min(cols))
        .enumerate()
        .for_each(|(jb, chunk)| {
            let j0 = jb * BLOCK;
            let jn = (j0 + BLOCK).min(cols);
            for i in 0..rows {
                let row = &input[i * cols..(i + 1) * cols];
                for j in j0..jn {
                    chunk[(j - j0) * rows + i] = row[j];
                }
            }
        });
}
