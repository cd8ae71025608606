use std::process::exit;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    exit(runbench_workloads::deargon::deargon_main(&args));
}
