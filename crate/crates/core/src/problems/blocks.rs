//! Evolutionary art: block start indexes plus (length, colour) pairs paint
//! a row-major canvas that should match a target image.

use super::ProblemError;
use crate::genome::{Genome, GenomeTemplate};
use crate::image::{Rgb, RgbImage};
use crate::omnirep::OmnirepProblem;

#[derive(Debug, Clone, PartialEq)]
pub struct BlocksProblem {
    pub target: RgbImage,
    pub base_color: Rgb,
    pub blocks: usize,
    pub max_block_len: usize,
}

impl BlocksProblem {
    pub fn new(target: RgbImage, base_color: Rgb, blocks: usize, max_block_len: usize) -> Self {
        Self {
            target,
            base_color,
            blocks,
            max_block_len: max_block_len.max(1),
        }
    }

    pub fn render(&self, representation: &Genome, encoding: &Genome) -> Result<RgbImage, ProblemError> {
        let starts = representation
            .as_ints()
            .ok_or_else(|| ProblemError::Contract("starts must be an int vector".into()))?;
        let blocks = encoding
            .as_pairs()
            .ok_or_else(|| ProblemError::Contract("blocks must be a pair list".into()))?;
        if starts.len() != blocks.len() {
            return Err(ProblemError::Contract(format!(
                "{} starts but {} blocks",
                starts.len(),
                blocks.len()
            )));
        }
        Ok(render_blocks(
            starts,
            blocks,
            (self.target.width, self.target.height),
            self.base_color,
        ))
    }
}

/// Unpacks a `0xRRGGBB` integer.
pub fn unpack_color(c: i64) -> Rgb {
    [(c >> 16) as u8, (c >> 8) as u8, c as u8]
}

/// Paints block `i` over pixels `[starts[i], starts[i] + len_i)` of a
/// base-coloured canvas, truncating at the last pixel. Later blocks
/// overwrite earlier ones.
pub fn render_blocks(
    starts: &[i64],
    blocks: &[(i64, i64)],
    (width, height): (usize, usize),
    base_color: Rgb,
) -> RgbImage {
    let mut img = RgbImage::filled(width, height, base_color);
    let total = img.pixels.len();
    for (&start, &(len, color)) in starts.iter().zip(blocks) {
        let from = start.max(0) as usize;
        let to = (start.max(0) + len.max(0)) as usize;
        let rgb = unpack_color(color);
        for px in img.pixels.iter_mut().take(to.min(total)).skip(from) {
            *px = rgb;
        }
    }
    img
}

/// Sum over pixels and channels of squared differences.
pub fn image_error(img: &RgbImage, target: &RgbImage) -> Result<f64, ProblemError> {
    if img.width != target.width || img.height != target.height {
        return Err(ProblemError::Contract(format!(
            "image is {}x{}, target is {}x{}",
            img.width, img.height, target.width, target.height
        )));
    }
    Ok(img
        .pixels
        .iter()
        .zip(&target.pixels)
        .flat_map(|(a, b)| a.iter().zip(b))
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum())
}

impl OmnirepProblem for BlocksProblem {
    fn representation_template(&self) -> GenomeTemplate {
        let last = (self.target.width * self.target.height).max(1) as i64 - 1;
        GenomeTemplate::int_uniform(self.blocks, 0, last)
    }

    fn encoding_template(&self) -> GenomeTemplate {
        GenomeTemplate::PairList {
            len: self.blocks,
            bounds: ((1, self.max_block_len as i64), (0, 0xFF_FFFF)),
        }
    }

    fn eval(&self, representation: &Genome, encoding: &Genome) -> Result<f64, ProblemError> {
        image_error(&self.render(representation, encoding)?, &self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RED: i64 = 0xFF0000;
    const BLUE: i64 = 0x0000FF;

    #[test]
    fn no_blocks_is_base() {
        let img = render_blocks(&[], &[], (3, 2), [9, 9, 9]);
        assert_eq!(img, RgbImage::filled(3, 2, [9, 9, 9]));
    }

    #[test]
    fn later_block_wins_overlap() {
        let img = render_blocks(&[0, 2], &[(4, RED), (2, BLUE)], (3, 2), [0, 0, 0]);
        let got: Vec<Rgb> = img.pixels;
        assert_eq!(
            got,
            vec![[255, 0, 0], [255, 0, 0], [0, 0, 255], [0, 0, 255], [0, 0, 0], [0, 0, 0]]
        );
    }

    #[test]
    fn blocks_truncate_without_wrapping() {
        let img = render_blocks(&[4], &[(10, RED)], (3, 2), [0, 0, 0]);
        assert_eq!(img.pixels[0], [0, 0, 0]);
        assert_eq!(img.pixels[4], [255, 0, 0]);
        assert_eq!(img.pixels[5], [255, 0, 0]);
    }

    #[test]
    fn sse() {
        let a = RgbImage::filled(1, 1, [1, 0, 0]);
        let b = RgbImage::filled(1, 1, [0, 0, 0]);
        assert_eq!(image_error(&a, &a).unwrap(), 0.0);
        assert_eq!(image_error(&a, &b).unwrap(), 1.0);
        let p = RgbImage::test_pattern(4, 4);
        let q = RgbImage::filled(4, 4, [10, 200, 30]);
        assert_eq!(image_error(&p, &q).unwrap(), image_error(&q, &p).unwrap());
        assert!(image_error(&p, &RgbImage::filled(4, 3, [0, 0, 0])).is_err());
    }
}
