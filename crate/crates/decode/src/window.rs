//! Sliding-window decoding over repeated noisy syndrome rounds.
//!
//! Round `j` of a window contributes `n` data variables and one measurement
//! variable per measured check. The first detector block is the raw syndrome
//! with the committed correction folded in, later blocks are differences of
//! consecutive raw syndromes. A measurement variable touches its own block and
//! the next one, so in the last round of a window it has weight one.

use lresc_core::{BitMatrix, BitVec};

use crate::{DecodeError, Decoder, DecoderConfig};

/// Extended check matrix for `rounds` rounds. `measured` lists the checks that
/// get a measurement-error variable in every round.
pub fn spacetime_matrix(h: &BitMatrix, rounds: usize, measured: &[usize]) -> BitMatrix {
    let (m, n) = (h.nrows(), h.ncols());
    let stride = n + measured.len();
    let mut entries = Vec::with_capacity(rounds * (h.nnz() + 2 * measured.len()));
    for j in 0..rounds {
        for (r, c) in h.entries() {
            entries.push((j * m + r, j * stride + c));
        }
        for (i, &c) in measured.iter().enumerate() {
            let col = j * stride + n + i;
            entries.push((j * m + c, col));
            if j + 1 < rounds {
                entries.push(((j + 1) * m + c, col));
            }
        }
    }
    BitMatrix::from_entries(rounds * m, rounds * stride, &entries).expect("indices in range")
}

/// One sector's syndrome history to be decoded with window `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeInstance {
    pub h: BitMatrix,
    pub window: usize,
    /// Raw (noisy) syndrome of every round.
    pub rounds: Vec<BitVec>,
}

#[derive(Debug, Clone)]
pub struct WindowDecoder {
    h: BitMatrix,
    window: usize,
    measured: Vec<usize>,
    data_priors: Vec<f64>,
    meas_priors: Vec<f64>,
    config: DecoderConfig,
    /// Decoder for windows of `L` rounds at index `L - 1`, built on demand.
    decoders: Vec<Option<Decoder>>,
}

impl WindowDecoder {
    /// Checks with zero measurement prior get no measurement variable.
    pub fn new(
        h: &BitMatrix,
        data_priors: &[f64],
        meas_priors: &[f64],
        config: &DecoderConfig,
    ) -> Result<Self, DecodeError> {
        config.validate()?;
        if data_priors.len() != h.ncols() || meas_priors.len() != h.nrows() {
            return Err(DecodeError::Config("prior lengths do not match the check matrix".into()));
        }
        let measured: Vec<usize> = (0..h.nrows()).filter(|&c| meas_priors[c] > 0.0).collect();
        Ok(Self {
            h: h.clone(),
            window: config.window,
            meas_priors: measured.iter().map(|&c| meas_priors[c]).collect(),
            measured,
            data_priors: data_priors.to_vec(),
            config: config.clone(),
            decoders: vec![None; config.window],
        })
    }

    fn decoder(&mut self, len: usize) -> Result<&mut Decoder, DecodeError> {
        if self.decoders[len - 1].is_none() {
            let st = spacetime_matrix(&self.h, len, &self.measured);
            let mut priors = Vec::with_capacity(st.ncols());
            for _ in 0..len {
                priors.extend_from_slice(&self.data_priors);
                priors.extend_from_slice(&self.meas_priors);
            }
            self.decoders[len - 1] = Some(self.config.build(&st, &priors)?);
        }
        Ok(self.decoders[len - 1].as_mut().expect("built above"))
    }

    /// Decodes a history, calling `on_commit(round, correction)` for every
    /// round in order; returning `false` stops early. The final window is
    /// committed in full.
    pub fn run(
        &mut self,
        rounds: &[BitVec],
        mut on_commit: impl FnMut(usize, &BitVec) -> bool,
    ) -> Result<(), DecodeError> {
        let (m, n) = (self.h.nrows(), self.h.ncols());
        let stride = n + self.measured.len();
        let total = rounds.len();
        let mut committed_syndrome = BitVec::zeros(m);
        let mut t = 0;
        while t < total {
            let end = (t + self.window).min(total);
            let len = end - t;
            let mut syndrome = BitVec::zeros(len * m);
            for j in 0..len {
                let mut block = rounds[t + j].clone();
                if j == 0 {
                    block.xor_assign(&committed_syndrome);
                } else {
                    block.xor_assign(&rounds[t + j - 1]);
                }
                for c in block.iter_ones() {
                    syndrome.set(j * m + c, true);
                }
            }
            let out = self.decoder(len)?.decode(&syndrome)?;
            let commits = if end == total { len } else { 1 };
            for j in 0..commits {
                let x = out.correction.slice(j * stride, n);
                committed_syndrome.xor_assign(&self.h.mul_vec(&x));
                if !on_commit(t + j, &x) {
                    return Ok(());
                }
            }
            t += commits;
        }
        Ok(())
    }

    pub fn decode_all(&mut self, rounds: &[BitVec]) -> Result<Vec<BitVec>, DecodeError> {
        let mut out = Vec::with_capacity(rounds.len());
        self.run(rounds, |_, x| {
            out.push(x.clone());
            true
        })?;
        Ok(out)
    }
}

/// Per-round committed data corrections for an instance.
pub fn sliding_window_decode(
    instance: &SpacetimeInstance,
    data_priors: &[f64],
    meas_priors: &[f64],
    config: &DecoderConfig,
) -> Result<Vec<BitVec>, DecodeError> {
    let cfg = config.clone().with_window(instance.window);
    WindowDecoder::new(&instance.h, data_priors, meas_priors, &cfg)?.decode_all(&instance.rounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_graph_shape() {
        let h: BitMatrix = "110;011".parse().unwrap();
        let st = spacetime_matrix(&h, 3, &[0, 1]);
        assert_eq!((st.nrows(), st.ncols()), (6, 15));
        // measurement columns: weight two except in the last round
        let w = st.col_weights();
        assert_eq!(&w[3..5], &[2, 2]);
        assert_eq!(&w[13..15], &[1, 1]);
        assert_eq!(spacetime_matrix(&h, 1, &[]), h);
    }
}
