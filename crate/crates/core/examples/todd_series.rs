//! Todd class, its square root, Chern character and Mukai vector.

use hkr_verifier::series;

fn main() {
    let w = 4;
    println!("Td        = {}", series::todd(w));
    println!("Td^(1/2)  = {}", series::sqrt_todd(w));
    println!("ch (rk 2) = {}", series::chern_character(2, w));
    println!("v  (rk 1) = {}", series::mukai_vector(1, 2));
    let sq = series::sqrt_todd(6);
    println!("sqrt^2 == Td to weight 6: {}", sq.mul(&sq) == series::todd(6));
}
