// quick timing probe for the n=12 catalog
fn main() {
    let t = std::time::Instant::now();
    let c = dcdc_core::catalog::connected_cubic_catalog(12);
    println!("n=12: {} classes in {:?}", c.len(), t.elapsed());
    let b = c.iter().filter(|g| g.is_bridgeless()).count();
    println!("bridgeless: {b}");
}
