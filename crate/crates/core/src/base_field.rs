//! Arithmetic in the two lower layers of the tower (the prime field and K),
//! plus the univariate polynomial routines needed to find defining
//! polynomials.

/// Minimal arithmetic interface for a small field whose elements are
/// indices in `[0, size)`.
pub(crate) trait SmallField {
    fn size(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Debug, Clone)]
pub(crate) struct PrimeField {
    pub p: u32,
}

impl SmallField for PrimeField {
    fn size(&self) -> u32 {
        self.p
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let mut r = 1u64;
        let mut base = a as u64;
        let mut e = self.p as u64 - 2;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r as u32
    }
}

/// K = F_p[x]/(g), elements encoded as `sum c_i p^i`, with log tables.
#[derive(Debug, Clone)]
pub(crate) struct SubField {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    pub g: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl SubField {
    pub fn new(p: u32, m: u32, g: Vec<u32>) -> Self {
        let q = p.pow(m);
        let prime = PrimeField { p };
        let mul_slow = |a: u32, b: u32| -> u32 {
            let da = digits(a, p, m as usize);
            let db = digits(b, p, m as usize);
            let prod = poly_mul(&prime, &da, &db);
            let red = poly_rem(&prime, &prod, &g);
            undigits(&red, p)
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let pow_slow = |a: u32, mut e: u64| -> u32 {
            let mut r = 1u32;
            let mut base = a;
            while e > 0 {
                if e & 1 == 1 {
                    r = mul_slow(r, base);
                }
                base = mul_slow(base, base);
                e >>= 1;
            }
            r
        };
        let generator = (1..q)
            .find(|&c| order == 0 || factors.iter().all(|&l| pow_slow(c, order / l) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; q as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order as u32 {
            exp[i as usize] = x;
            log[x as usize] = i;
            x = mul_slow(x, generator);
        }
        Self {
            p,
            m,
            q,
            g,
            exp,
            log,
        }
    }
}

impl SmallField for SubField {
    fn size(&self) -> u32 {
        self.q
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }
    fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let e = self.log[a as usize] + self.log[b as usize];
        self.exp[(if e >= n { e - n } else { e }) as usize]
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let n = self.q - 1;
        let l = self.log[a as usize];
        self.exp[((n - l) % n) as usize]
    }
}

pub(crate) fn digits(mut v: u32, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % base);
        v /= base;
    }
    out
}

pub(crate) fn undigits(ds: &[u32], base: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * base + d)
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn poly_mul<F: SmallField>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo `m`; `m` need not be monic but must be nonzero.
pub(crate) fn poly_rem<F: SmallField>(f: &F, a: &[u32], m: &[u32]) -> Vec<u32> {
    let m = trim(m.to_vec());
    assert!(!m.is_empty(), "polynomial division by zero");
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = f.mul(r[top], lead_inv);
        let shift = top - dm;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mc));
        }
        r = trim(r);
    }
    r
}

fn poly_gcd<F: SmallField>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod<F: SmallField>(f: &F, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = poly_rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(f, &poly_mul(f, &result, &b), m);
        }
        b = poly_rem(f, &poly_mul(f, &b, &b), m);
        e >>= 1;
    }
    result
}

/// Ben-Or test: a monic `h` of degree n is irreducible iff
/// gcd(h, y^(s^i) - y) = 1 for every i <= n/2, s = #field.
pub(crate) fn is_irreducible<F: SmallField>(f: &F, h: &[u32]) -> bool {
    let n = h.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let s = f.size() as u64;
    let y = vec![0u32, 1];
    let mut power = y.clone();
    for _ in 1..=n / 2 {
        power = poly_powmod(f, &power, s, h);
        let mut diff = power.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = f.sub(diff[1], 1);
        let diff = trim(diff);
        let gcd = poly_gcd(f, h, &diff);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible of degree `n`: the low-order
/// coefficients, read as a base-#field integer (constant term least
/// significant), are minimal.
pub(crate) fn least_irreducible<F: SmallField>(f: &F, n: u32) -> Vec<u32> {
    let s = f.size() as u64;
    let count = s.pow(n);
    for v in 0..count {
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        let mut x = v;
        for _ in 0..n {
            coeffs.push((x % s) as u32);
            x /= s;
        }
        coeffs.push(1);
        if is_irreducible(f, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
