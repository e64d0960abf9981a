//! Connected-component labeling of binary masks.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::BinaryMask;

/// Pixel adjacency used when growing regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl TryFrom<u8> for Connectivity {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            _ => Err(Error::InvalidParameter {
                name: "connectivity",
                reason: "must be 4 or 8",
            }),
        }
    }
}

/// Result of labeling: `labels[i] == 0` for unset pixels, otherwise the
/// 1-based region id; `areas[id - 1]` is that region's pixel count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub areas: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.areas.len()
    }

    pub fn area_of_pixel(&self, idx: usize) -> usize {
        match self.labels[idx] {
            0 => 0,
            l => self.areas[l as usize - 1],
        }
    }
}

/// Labels the set pixels of `mask`, scanning in row-major order so ids are
/// assigned deterministically.
pub fn connected_components(mask: &BinaryMask, connectivity: Connectivity) -> Components {
    let (w, h) = mask.dims();
    let set = mask.data();
    let mut labels = vec![0u32; w * h];
    let mut areas = Vec::new();
    let mut stack = Vec::new();

    const N4: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
    const N8: [(isize, isize); 8] = [
        (-1, -1),
        (0, -1),
        (1, -1),
        (-1, 0),
        (1, 0),
        (-1, 1),
        (0, 1),
        (1, 1),
    ];
    let offsets: &[(isize, isize)] = match connectivity {
        Connectivity::Four => &N4,
        Connectivity::Eight => &N8,
    };

    for start in 0..w * h {
        if !set[start] || labels[start] != 0 {
            continue;
        }
        let id = areas.len() as u32 + 1;
        let mut area = 0usize;
        labels[start] = id;
        stack.push(start);
        while let Some(p) = stack.pop() {
            area += 1;
            let (px, py) = ((p % w) as isize, (p / w) as isize);
            for &(dx, dy) in offsets {
                let (nx, ny) = (px + dx, py + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let q = ny as usize * w + nx as usize;
                if set[q] && labels[q] == 0 {
                    labels[q] = id;
                    stack.push(q);
                }
            }
        }
        areas.push(area);
    }

    Components {
        width: w,
        height: h,
        labels,
        areas,
    }
}
