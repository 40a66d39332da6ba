use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Kronecker symbol (d/n), extended to all integers n.
pub fn kronecker_symbol(d: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if d.abs().is_one() { 1 } else { 0 };
    }
    let mut result = 1;
    let mut m = n.clone();
    if m.is_negative() {
        m = -m;
        if d.is_negative() {
            result = -result;
        }
    }
    let twos = m.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        if d.is_even() {
            return 0;
        }
        m >>= twos;
        let r = d.mod_floor(&BigInt::from(8)).to_u8().unwrap_or(0);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    result * jacobi(d.mod_floor(&m), m)
}

/// Machine-word Kronecker symbol; agrees with [`kronecker_symbol`].
pub fn kronecker_i64(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut m = n.unsigned_abs();
    if n < 0 && d < 0 {
        result = -result;
    }
    let twos = m.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        m >>= twos;
        let r = d.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    let mut a = d.rem_euclid(m as i64) as u64;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && (m % 8 == 3 || m % 8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

// Jacobi symbol (a/m) for odd m > 0 and 0 <= a < m.
fn jacobi(mut a: BigInt, mut m: BigInt) -> i32 {
    let mut result = 1;
    let eight = BigInt::from(8);
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            let r = m.mod_floor(&eight).to_u8().unwrap_or(0);
            if twos % 2 == 1 && (r == 3 || r == 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        let four = BigInt::from(4);
        if a.mod_floor(&four) == BigInt::from(3) && m.mod_floor(&four) == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&m);
    }
    if m.is_one() {
        result
    } else {
        0
    }
}
