fn main() {
    // probe 1: empty-entry JSON round trip
    let d = boxlab::JointDistribution::from_table([[0.0; 8]; 8]).unwrap();
    let json = d.to_box322_json();
    println!("json = {json}");
    match boxlab::JointDistribution::from_box322_json(&json) {
        Ok(back) => println!("round trip ok, equal = {}", back == d),
        Err(e) => println!("parse error: {e}"),
    }

    // probe 2: max Q given P = 0.5
    let sol = boxlab::lp::max_q_given_p(0.5).unwrap();
    println!("status {:?} value {}", sol.status, sol.value);
    let lp = {
        let base = boxlab::lp::build_gnst_problem();
        base
    };
    println!("violation vs gnst rows: {}", sol.max_violation(&lp));
    if let Ok(d) = sol.as_distribution() {
        println!("validate all_ok: {}", d.validate().all_ok());
        let (c, zeros) = d.hardy_cabello_check();
        println!("C = {c}, zeros_ok = {zeros}, P = {}, Q = {}", d.at("UUU|+++"), d.at("DDD|---"));
    }
}
