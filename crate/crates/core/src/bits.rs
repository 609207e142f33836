//! Packed bit rows and the shifted-window primitives used by the counting
//! kernels.

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub fn get(words: &[u64], pos: usize) -> bool {
    words[pos / 64] >> (pos % 64) & 1 == 1
}

#[inline]
pub fn set(words: &mut [u64], pos: usize) {
    words[pos / 64] |= 1 << (pos % 64);
}

#[inline]
pub fn clear(words: &mut [u64], pos: usize) {
    words[pos / 64] &= !(1 << (pos % 64));
}

pub fn count_ones(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

/// Reads bits `start..start + 64` of `words` as one word. Bits past the end
/// read as zero.
#[inline]
fn word_at(words: &[u64], start: usize) -> u64 {
    let (i, off) = (start / 64, start % 64);
    let lo = words.get(i).copied().unwrap_or(0);
    if off == 0 {
        lo
    } else {
        let hi = words.get(i + 1).copied().unwrap_or(0);
        (lo >> off) | (hi << (64 - off))
    }
}

/// ANDs bits `start..start + len` of `src` into `acc`, whose bit `b`
/// corresponds to source bit `start + b`. `acc` must hold `len` bits; bits at
/// or past `len` in the last word are cleared.
pub fn and_window(acc: &mut [u64], src: &[u64], start: usize, len: usize) {
    debug_assert!(acc.len() >= words_for(len));
    let full = len / 64;
    for (w, slot) in acc.iter_mut().take(full).enumerate() {
        *slot &= word_at(src, start + 64 * w);
    }
    let rem = len % 64;
    if rem > 0 {
        let mask = (1u64 << rem) - 1;
        acc[full] &= word_at(src, start + 64 * full) & mask;
    }
}

/// ORs `len` bits of `src` starting at `src_start` into `dst` starting at
/// `dst_start`.
pub fn or_window(dst: &mut [u64], dst_start: usize, src: &[u64], src_start: usize, len: usize) {
    let mut done = 0;
    while done < len {
        let take = (len - done).min(64);
        let mut val = word_at(src, src_start + done);
        if take < 64 {
            val &= (1u64 << take) - 1;
        }
        let p = dst_start + done;
        let (i, off) = (p / 64, p % 64);
        dst[i] |= val << off;
        if off != 0 && off + take > 64 {
            dst[i + 1] |= val >> (64 - off);
        }
        done += take;
    }
}

/// Fills `acc` with ones on its first `len` bits and zeros elsewhere.
pub fn fill_ones(acc: &mut [u64], len: usize) {
    for (w, slot) in acc.iter_mut().enumerate() {
        let lo = 64 * w;
        *slot = if lo + 64 <= len {
            u64::MAX
        } else if lo >= len {
            0
        } else {
            (1u64 << (len - lo)) - 1
        };
    }
}

/// Iterates the positions of set bits in ascending order.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(64 * i + b)
            }
        })
    })
}
