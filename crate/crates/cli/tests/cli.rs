use std::process::{Command, Output};

use catzx_cli::{BenchRecord, CSV_HEADER};

fn catzx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catzx")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": "))).unwrap_or_else(|| panic!("no {key} in {text}"))
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn empty_circuit_has_amplitude_one() {
    let dir = tempfile::tempdir().unwrap();
    let q = write(&dir, "e.qasm", "OPENQASM 2.0;\nqreg q[3];\n");
    let o = catzx(&["simulate", "--qasm", &q, "--in", "+++", "--out", "+++", "--strategy", "cats", "--workers", "1", "--seed", "0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(field(&s, "amplitude"), "1.000000000000 +0.000000000000i");
    assert_eq!(field(&s, "leaf_terms"), "1");
}

#[test]
fn usage_errors_exit_2() {
    let o = catzx(&["simulate", "--in", "0", "--out", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--qasm"));

    let dir = tempfile::tempdir().unwrap();
    let q = write(&dir, "bad.qasm", "qreg q[1];\nrx(0.1) q[0];\n");
    let o = catzx(&["simulate", "--qasm", &q, "--in", "0", "--out", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:1"));

    let q = write(&dir, "ok.qasm", "qreg q[2];\nh q[0];\n");
    assert_eq!(catzx(&["simulate", "--qasm", &q, "--in", "0", "--out", "00"]).status.code(), Some(2));
    assert_eq!(catzx(&["simulate", "--qasm", &q, "--in", "0x", "--out", "00"]).status.code(), Some(2));
    assert_eq!(catzx(&["simulate", "--qasm", &q, "--in", "00", "--out", "00", "--strategy", "fast"]).status.code(), Some(2));
    assert_eq!(catzx(&["bench", "cliffordt", "--step", "0"]).status.code(), Some(2));
}

#[test]
fn budget_overrun_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = catzx(&["generate", "cliffordt", "--qubits", "6", "--t", "20", "--seed", "2"]);
    let q = write(&dir, "c.qasm", &stdout(&g));
    let o = catzx(&["simulate", "--qasm", &q, "--in", "000000", "--out", "000000", "--strategy", "naive", "--max-leaves", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn strategies_agree_on_a_hidden_shift_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = catzx(&["generate", "hiddenshift", "--qubits", "8", "--ccz", "4", "--seed", "5"]);
    assert!(g.status.success());
    let text = stdout(&g);
    let shift = text.lines().next().unwrap().rsplit("shift=").next().unwrap().to_string();
    let q = write(&dir, "h.qasm", &text);
    let run = |s: &str, w: &str| {
        let o = catzx(&["simulate", "--qasm", &q, "--in", "00000000", "--out", &shift, "--strategy", s, "--workers", w]);
        assert!(o.status.success());
        field(&stdout(&o), "exact").to_string()
    };
    let cats = run("cats", "1");
    assert_eq!(cats, "2^(0/2) * (1 + 0*w + 0*w^2 + 0*w^3)");
    assert_eq!(run("bss", "1"), cats);
    assert_eq!(run("naive", "1"), cats);
    assert_eq!(run("cats", "4"), cats);
}

#[test]
fn trace_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let q = write(&dir, "t.qasm", "qreg q[1];\nh q[0];\nt q[0];\nh q[0];\n");
    let o = catzx(&["simulate", "--qasm", &q, "--in", "0", "--out", "0", "--dump-diagram", "--trace"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("v ")));
    assert!(s.contains("scalar "));
    assert_eq!(field(&s, "initial_t"), "1");
    // (1 + ω)/2
    let amp = field(&s, "amplitude");
    assert!(amp.starts_with("0.853553390593"), "{amp}");
}

#[test]
fn bench_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = catzx(&[
        "bench", "cliffordt", "--qubits", "5", "--tmax", "10", "--step", "3", "--reps", "2", "--strategy", "cats,naive", "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("summary strategy=cats runs=8"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let recs: Vec<BenchRecord> = csv::Reader::from_reader(text.as_bytes()).deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(recs.len(), 16);
    let ts: Vec<usize> = recs.iter().step_by(4).map(|r| r.t_count).collect();
    assert_eq!(ts, [1, 4, 7, 10]);
    for pair in recs.chunks(2) {
        assert_eq!(pair[0].id, pair[1].id);
        assert_eq!((pair[0].amp_re, pair[0].amp_im), (pair[1].amp_re, pair[1].amp_im));
    }
}

#[test]
fn bench_hiddenshift_header_only_and_determinism() {
    let o = catzx(&["bench", "hiddenshift", "--qubits", "20", "--ccz", "16", "--count", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), format!("{CSV_HEADER}\n"));

    let args = ["bench", "hiddenshift", "--qubits", "8", "--ccz", "4", "--count", "3", "--seed", "11"];
    let strip = |s: String| -> Vec<String> {
        // wall_ms is the only column allowed to vary
        s.lines().map(|l| l.split(',').enumerate().filter(|(i, _)| *i != 5).map(|(_, c)| c).collect::<Vec<_>>().join(",")).collect()
    };
    let a = strip(stdout(&catzx(&args)));
    let b = strip(stdout(&catzx(&args)));
    assert_eq!(a.len(), 4);
    assert_eq!(a, b);
    for l in &a[1..] {
        assert!(l.contains(",28,cats,"), "{l}");
    }
}

#[test]
fn generate_roundtrips_through_simulate_and_diagram_output() {
    let g = catzx(&["generate", "cliffordt", "--qubits", "4", "--t", "3", "--seed", "1", "--diagram"]);
    assert!(g.status.success());
    let text = stdout(&g);
    assert!(text.starts_with("# cliffordt"));
    let d = catzx::Diagram::from_text(&text).unwrap();
    assert_eq!(d.tcount(), 3);
    assert_eq!(catzx(&["generate", "hiddenshift", "--qubits", "7", "--ccz", "2"]).status.code(), Some(2));
}
