use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn raycell(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raycell"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn two_site_fixture_passes_oracle_check() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sites.txt"), "2 5\n8 5\n").unwrap();
    let out = raycell(
        dir.path(),
        &[
            "--sites",
            "sites.txt",
            "--world",
            "0 0 10 0 10 10 0 10",
            "--oracle-check",
            "--out",
            "d.json",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), 2);
    assert_eq!(json["world"]["vertices"][2], serde_json::json!([10.0, 10.0]));
    assert!(json.get("delaunay").is_none());
}

#[test]
fn duplicate_sites_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sites.txt"), "1 1\n1 1\n3 3\n").unwrap();
    let out = raycell(dir.path(), &["--sites", "sites.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coincide"));
}

#[test]
fn injected_fault_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = raycell(
        dir.path(),
        &[
            "--generate",
            "uniform:30:3",
            "--world",
            "0 0 50 0 50 50 0 50",
            "--inject-fault",
            "--oracle-check",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disagrees with the oracle"));
}

#[test]
fn malformed_inputs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "1 2 3\n").unwrap();
    assert_eq!(raycell(dir.path(), &["--sites", "bad.txt"]).status.code(), Some(1));
    assert_eq!(
        raycell(dir.path(), &["--generate", "gauss:5:1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        raycell(dir.path(), &["--generate", "uniform:5:1", "--world", "0 0 1 1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(raycell(dir.path(), &[]).status.code(), Some(1));
}

#[test]
fn svg_structure_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--generate",
        "uniform:20:11",
        "--world",
        "0 0 100 0 100 100 0 100",
        "--delaunay",
        "--svg",
        "a.svg",
        "--out",
        "a.json",
    ];
    assert_eq!(raycell(dir.path(), &args).status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("a.svg")).unwrap();
    for id in ["id=\"world\"", "id=\"cells\"", "id=\"sites\"", "id=\"delaunay\""] {
        assert!(svg.contains(id), "missing {id}");
    }
    assert_eq!(svg.matches("<circle").count(), 20);

    let mut args2 = args;
    args2[6] = "b.svg";
    args2[8] = "b.json";
    assert_eq!(raycell(dir.path(), &args2).status.code(), Some(0));
    assert_eq!(svg, fs::read_to_string(dir.path().join("b.svg")).unwrap());
    assert_eq!(
        fs::read_to_string(dir.path().join("a.json")).unwrap(),
        fs::read_to_string(dir.path().join("b.json")).unwrap()
    );
}

#[test]
fn single_site_svg_has_world_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let out = raycell(
        dir.path(),
        &["--generate", "uniform:1:42", "--world", "0 0 10 0 10 10 0 10", "--svg", "one.svg"],
    );
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("one.svg")).unwrap();
    assert!(svg.contains("<polygon points=\"0,0 10,0 10,10 0,10\"/>"));
    assert_eq!(svg.matches("<circle").count(), 1);
}

#[test]
fn bench_mode_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = raycell(
        dir.path(),
        &["--generate", "uniform:200:9", "--bench", "2", "--threads", "1"],
    );
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "n,workers,build_ms,mean_e_k,max_r_k,total_rays");
    assert_eq!(lines.len(), 3);
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[0], "200");
        assert_eq!(fields[1], "1");
    }
}

#[test]
fn json_output_reparses_as_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--generate",
        "uniform:40:5",
        "--world",
        "0 0 60 0 60 60 0 60",
        "--delaunay",
        "--out",
        "d.json",
    ];
    assert_eq!(raycell(dir.path(), &args).status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("d.json")).unwrap();
    let diagram: raycell::Diagram = serde_json::from_str(&text).unwrap();
    assert_eq!(diagram.cells.len(), 40);
    assert!(diagram.delaunay.is_some());
    assert_eq!(serde_json::to_string(&diagram).unwrap(), text);
}
