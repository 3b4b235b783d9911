use std::process::{Command, Output};

fn jetlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetlie")).args(args).output().expect("jetlie runs")
}

#[test]
fn table_ecga_holds() {
    let o = jetlie(&["table", "--algebra", "ecga"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn ecga_x1_is_not_a_symmetry_of_the_flow_system() {
    let o = jetlie(&["invariance", "--system", "sys_4_2", "--field", "ecga:X1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("residual"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(jetlie(&["table", "--algebra", "no_such_algebra"]).status.code(), Some(2));
    assert_eq!(jetlie(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(jetlie(&["invariance", "--algebra", "ecga", "--expr", "u1_x +"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jl");
    std::fs::write(&path, "space S { independent t; dependent u; order 1 }\nexpr A on S = (u_t;").unwrap();
    let o = jetlie(&["--file", path.to_str().unwrap(), "invariance", "--expr", "A", "--field", "ecga:X0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn only_selects_a_group() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let o = jetlie(&["verify-paper", "--only", "theorem7", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let checks = text.lines().filter(|l| l.contains("\"record\":\"check\"")).count();
    assert_eq!(checks, 9);
    assert!(text.lines().next().unwrap().contains("\"record\":\"header\""));
    assert!(text.lines().last().unwrap().contains("\"record\":\"summary\""));
}

#[test]
fn file_definitions_are_usable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heat.jl");
    std::fs::write(
        &path,
        "space H { independent t, x; dependent u; order 2 }\n\
         field G on H = t*@x - (1/2)*x*u*@u;\n\
         system Heat on H { u_t = u_xx; solve for u_t; }\n",
    )
    .unwrap();
    let o = jetlie(&["--file", path.to_str().unwrap(), "invariance", "--system", "Heat", "--field", "G"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
}
