//! Words over the alphabet `{0, …, q-1}`, Lyndon words and the
//! Chen–Fox–Lyndon factorization.
//!
//! Letters are plain integers and the order on letters is integer order.
//! Words are compared lexicographically with the prefix rule: when one word
//! is a proper prefix of the other, the longer word is the greater one, so
//! `0 < 001 < 01 < 011 < 1`. This is exactly the `Ord` of Rust slices.
//!
//! Counting functions return exact `u128` values and report overflow
//! instead of wrapping.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub type Letter = u32;

/// Exact integer used for every count in the crate.
pub type Count = u128;

/// Default cap on the number of words a brute-force enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A finite word over the alphabet `{0, …, q-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    q: u32,
}

impl Word {
    /// Builds a word, checking every letter against the alphabet size.
    pub fn new(letters: Vec<Letter>, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::arg("alphabet size must be at least 1"));
        }
        if let Some(&bad) = letters.iter().find(|&&a| a >= q) {
            return Err(Error::arg(format!("letter {bad} is not below q = {q}")));
        }
        Ok(Word { letters, q })
    }

    pub(crate) fn from_trusted(letters: Vec<Letter>, q: u32) -> Self {
        debug_assert!(letters.iter().all(|&a| a < q));
        Word { letters, q }
    }

    pub fn empty(q: u32) -> Result<Self> {
        Word::new(Vec::new(), q)
    }

    /// Parses the textual form produced by `Display`: a digit string when
    /// `q <= 10`, comma separated integers otherwise.
    pub fn parse(s: &str, q: u32) -> Result<Self> {
        let s = s.trim();
        let letters = if q <= 10 {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::arg(format!("'{c}' is not a digit")))
                })
                .collect::<Result<Vec<_>>>()?
        } else if s.is_empty() {
            Vec::new()
        } else {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<Letter>()
                        .map_err(|_| Error::arg(format!("'{t}' is not a letter index")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Word::new(letters, q)
    }

    /// Maps `A..=Z` to `0..=25` over a 26-letter alphabet.
    pub fn from_latin(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| {
                if c.is_ascii_uppercase() {
                    Ok(c as Letter - 'A' as Letter)
                } else {
                    Err(Error::arg(format!("'{c}' is not an upper-case latin letter")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters, 26)
    }

    /// Inverse of [`Word::from_latin`].
    pub fn to_latin(&self) -> Option<String> {
        if self.q > 26 {
            return None;
        }
        Some(
            self.letters
                .iter()
                .map(|&a| char::from(b'A' + a as u8))
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Cyclic shift by `k` positions to the left.
    pub fn rotation(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        Word::from_trusted(letters, self.q)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for a in &self.letters {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|a| a.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// Words over a common alphabet are totally ordered; words over different
/// alphabets are ordered by alphabet size first so that `Ord` stays total.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q
            .cmp(&other.q)
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic comparison of two words over the same alphabet.
pub fn lex_compare(w: &Word, w2: &Word) -> Result<Ordering> {
    if w.q != w2.q {
        return Err(Error::arg(format!(
            "alphabet sizes differ ({} vs {})",
            w.q, w2.q
        )));
    }
    Ok(w.letters.as_slice().cmp(w2.letters.as_slice()))
}

/// Calls `f(start, len)` for every factor of the Lyndon factorization of
/// `s`, from left to right (Duval's algorithm, linear time, no allocation).
pub(crate) fn duval_for_each<T: Ord>(s: &[T], mut f: impl FnMut(usize, usize)) {
    let n = s.len();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        let period = j - k;
        while i <= k {
            f(i, period);
            i += period;
        }
    }
}

/// True when `s` is non-empty and strictly smaller than all its proper
/// rotations. Linear time.
pub(crate) fn is_lyndon_slice<T: Ord>(s: &[T]) -> bool {
    if s.is_empty() {
        return false;
    }
    let mut factors = 0usize;
    let mut first_len = 0usize;
    duval_for_each(s, |_, len| {
        if factors == 0 {
            first_len = len;
        }
        factors += 1;
    });
    factors == 1 && first_len == s.len()
}

/// True when the Lyndon factorization of `s` has no repeated factor.
/// Equal factors are always adjacent, so one adjacent check suffices.
pub(crate) fn has_strict_factorization<T: Ord>(s: &[T]) -> bool {
    let mut prev: Option<(usize, usize)> = None;
    let mut strict = true;
    duval_for_each(s, |start, len| {
        if let Some((ps, pl)) = prev {
            if pl == len && s[ps..ps + pl] == s[start..start + len] {
                strict = false;
            }
        }
        prev = Some((start, len));
    });
    strict
}

pub fn is_lyndon(w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::arg("the empty word has no Lyndon property"));
    }
    Ok(is_lyndon_slice(&w.letters))
}

/// The unique factorization of a word into Lyndon words in non-increasing
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LyndonFactorization {
    factors: Vec<Word>,
}

impl LyndonFactorization {
    /// Wraps a list of factors after checking the factorization invariants.
    pub fn from_factors(factors: Vec<Word>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::arg("a factorization needs at least one factor"));
        }
        let q = factors[0].q;
        for f in &factors {
            if f.q != q {
                return Err(Error::arg("factors over different alphabets"));
            }
            if !is_lyndon(f)? {
                return Err(Error::arg(format!("factor {f} is not a Lyndon word")));
            }
        }
        if factors.windows(2).any(|p| p[0].letters < p[1].letters) {
            return Err(Error::arg("factors are not in non-increasing order"));
        }
        Ok(LyndonFactorization { factors })
    }

    pub fn factors(&self) -> &[Word] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Concatenation of the factors, i.e. the factorized word.
    pub fn concat(&self) -> Word {
        let q = self.factors[0].q;
        let letters = self
            .factors
            .iter()
            .flat_map(|f| f.letters.iter().copied())
            .collect();
        Word::from_trusted(letters, q)
    }

    pub fn into_factors(self) -> Vec<Word> {
        self.factors
    }
}

impl fmt::Display for LyndonFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.factors {
            write!(f, "({w})")?;
        }
        Ok(())
    }
}

pub fn duval_factorize(w: &Word) -> Result<LyndonFactorization> {
    if w.is_empty() {
        return Err(Error::arg("cannot factorize the empty word"));
    }
    let mut factors = Vec::new();
    duval_for_each(&w.letters, |start, len| {
        factors.push(Word::from_trusted(
            w.letters[start..start + len].to_vec(),
            w.q,
        ));
    });
    Ok(LyndonFactorization { factors })
}

pub fn is_strictly_decreasing(f: &LyndonFactorization) -> bool {
    f.factors.windows(2).all(|p| p[0].letters > p[1].letters)
}

/// All Lyndon words of length at most `max_len`, in lexicographic order.
///
/// Duval's successor rule: repeat the current word up to `max_len`, strip
/// trailing maximal letters, increment the last letter.
pub fn lyndon_words_up_to(q: u32, max_len: usize) -> Result<Vec<Word>> {
    if q == 0 {
        return Err(Error::arg("alphabet size must be at least 1"));
    }
    let mut out = Vec::new();
    if max_len == 0 {
        return Ok(out);
    }
    let top = q - 1;
    let mut w: Vec<Letter> = vec![0];
    loop {
        out.push(Word::from_trusted(w.clone(), q));
        let period = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - period]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    Ok(out)
}

/// All Lyndon words of length exactly `l`, in lexicographic order.
pub fn lyndon_words(q: u32, l: usize) -> Result<Vec<Word>> {
    if l == 0 {
        return Err(Error::arg("Lyndon words have length at least 1"));
    }
    if q == 0 {
        return Err(Error::arg("alphabet size must be at least 1"));
    }
    // Fredricksen–Kessler–Maiorana restricted to one length: a prenecklace
    // whose period equals `l` is a Lyndon word.
    let mut out = Vec::new();
    let mut a: Vec<Letter> = vec![0; l + 1];
    fkm(1, 1, l, q, &mut a, &mut out);
    Ok(out)
}

fn fkm(t: usize, p: usize, n: usize, q: u32, a: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if t > n {
        if p == n {
            out.push(Word::from_trusted(a[1..=n].to_vec(), q));
        }
        return;
    }
    a[t] = a[t - p];
    fkm(t + 1, p, n, q, a, out);
    for letter in a[t - p] + 1..q {
        a[t] = letter;
        fkm(t + 1, t, n, q, a, out);
    }
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub(crate) fn checked_pow(base: u128, exp: usize, what: &str) -> Result<Count> {
    let exp32 = u32::try_from(exp).map_err(|_| Error::Overflow(format!("{what}: exponent {exp}")))?;
    base.checked_pow(exp32)
        .ok_or_else(|| Error::Overflow(format!("{what}: {base}^{exp}")))
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |d| n % d == 0)
}

/// Number of Lyndon words of length `l` over `q` letters,
/// `(1/l) * sum_{d | l} mu(d) q^(l/d)`.
pub fn count_lyndon(q: u32, l: usize) -> Result<Count> {
    if l == 0 {
        return Err(Error::arg("Lyndon words have length at least 1"));
    }
    if q == 0 {
        return Err(Error::arg("alphabet size must be at least 1"));
    }
    let mut plus: Count = 0;
    let mut minus: Count = 0;
    for d in divisors(l) {
        let term = checked_pow(q as u128, l / d, "Lyndon count")?;
        match mobius(d as u64) {
            1 => plus = plus.checked_add(term).ok_or_else(|| Error::Overflow("Lyndon count".into()))?,
            -1 => minus += term,
            _ => {}
        }
    }
    let total = plus - minus;
    debug_assert_eq!(total % l as u128, 0);
    Ok(total / l as u128)
}

/// Checks `sum_{l | m} l L_q(l) = q^m` in exact arithmetic.
pub fn verify_lemma1(q: u32, m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::arg("m must be at least 1"));
    }
    let mut lhs: Count = 0;
    for l in divisors(m) {
        let term = count_lyndon(q, l)?
            .checked_mul(l as u128)
            .ok_or_else(|| Error::Overflow("divisor sum".into()))?;
        lhs = lhs
            .checked_add(term)
            .ok_or_else(|| Error::Overflow("divisor sum".into()))?;
    }
    Ok(lhs == checked_pow(q as u128, m, "q^m")?)
}

/// `q^n`, refused when above `budget`.
pub(crate) fn guarded_word_count(q: u32, n: usize, budget: u64, what: &'static str) -> Result<Count> {
    let total = checked_pow(q as u128, n, what).map_err(|_| Error::BudgetExceeded {
        what,
        required: u128::MAX,
        budget,
    })?;
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            what,
            required: total,
            budget,
        });
    }
    Ok(total)
}

/// Odometer over all words of a fixed length, visiting them in
/// lexicographic order.
pub(crate) struct WordOdometer {
    q: u32,
    current: Vec<Letter>,
    started: bool,
    done: bool,
}

impl WordOdometer {
    pub(crate) fn new(q: u32, n: usize) -> Self {
        WordOdometer {
            q,
            current: vec![0; n],
            started: false,
            done: q == 0,
        }
    }

    /// Advances to the next word; returns `None` once exhausted.
    pub(crate) fn next_word(&mut self) -> Option<&[Letter]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        for pos in (0..self.current.len()).rev() {
            if self.current[pos] + 1 < self.q {
                self.current[pos] += 1;
                return Some(&self.current);
            }
            self.current[pos] = 0;
        }
        self.done = true;
        None
    }
}

/// Counts words of length `n` whose Lyndon factorization is strictly
/// decreasing by visiting all `q^n` words.
pub fn count_strictly_decreasing_bruteforce(q: u32, n: usize, budget: u64) -> Result<Count> {
    if q == 0 {
        return Err(Error::arg("alphabet size must be at least 1"));
    }
    guarded_word_count(q, n, budget, "brute-force word enumeration")?;
    if n == 0 {
        return Ok(1);
    }
    let mut odo = WordOdometer::new(q, n);
    let mut count: Count = 0;
    while let Some(w) = odo.next_word() {
        if has_strict_factorization(w) {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of words of length `n` with a strictly decreasing Lyndon
/// factorization: 1 for `n = 0`, `q` for `n = 1`, `(q-1) q^(n-1)` otherwise.
pub fn str_count(q: u32, n: usize) -> Result<Count> {
    if q == 0 {
        return Err(Error::arg("alphabet size must be at least 1"));
    }
    match n {
        0 => Ok(1),
        1 => Ok(q as Count),
        _ => {
            let p = checked_pow(q as u128, n - 1, "strict decomposition count")?;
            p.checked_mul((q - 1) as u128)
                .ok_or_else(|| Error::Overflow("strict decomposition count".into()))
        }
    }
}

/// Truncated expansion of `prod_{l >= 1} (1 + x^l)^{L_q(l)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTruncation {
    pub q: u32,
    pub order: usize,
    pub coeffs: Vec<Count>,
}

fn binomial(n: Count, k: usize) -> Result<Count> {
    let k = k as Count;
    if k > n {
        return Ok(0);
    }
    let mut acc: Count = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc
            .checked_mul(n - i)
            .ok_or_else(|| Error::Overflow("binomial coefficient".into()))?
            / (i + 1);
    }
    Ok(acc)
}

pub fn series_truncation(q: u32, order: usize) -> Result<SeriesTruncation> {
    if q == 0 {
        return Err(Error::arg("alphabet size must be at least 1"));
    }
    let mut coeffs: Vec<Count> = vec![0; order + 1];
    coeffs[0] = 1;
    for l in 1..=order {
        let lyn = count_lyndon(q, l)?;
        if lyn == 0 {
            continue;
        }
        // (1 + x^l)^lyn = sum_j C(lyn, j) x^(l j)
        let max_j = order / l;
        let binom: Vec<Count> = (0..=max_j).map(|j| binomial(lyn, j)).collect::<Result<_>>()?;
        let mut next: Vec<Count> = vec![0; order + 1];
        for (deg, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &b) in binom.iter().enumerate() {
                let d = deg + l * j;
                if d > order {
                    break;
                }
                let term = c
                    .checked_mul(b)
                    .ok_or_else(|| Error::Overflow("series coefficient".into()))?;
                next[d] = next[d]
                    .checked_add(term)
                    .ok_or_else(|| Error::Overflow("series coefficient".into()))?;
            }
        }
        coeffs = next;
    }
    Ok(SeriesTruncation { q, order, coeffs })
}
