use dunkl::*;
use dunkl::dynamics::*;

fn main() {
    let p = DunklParam::new(0.5).unwrap();
    let mt = MassTime::natural().with_regularizer(0.05);
    let (x, y, t) = (2.5724661333849093, -1.6747406950590473, 0.38014157484441274);
    let a = free_propagator(x, y, t, &p, &mt).unwrap();
    let b = free_propagator(y, x, t, &p, &mt).unwrap();
    println!("K(x,y) = {a:?}");
    println!("K(y,x) = {b:?}");
    println!("rel diff {:.3e}, |a| = {:.3e}", (a-b).norm()/a.norm(), a.norm());
    let u = num_complex::Complex64::new(1.0,0.05)*x*y/(num_complex::Complex64::i()*t);
    println!("u = {u}, |u| = {}", u.norm());
}
