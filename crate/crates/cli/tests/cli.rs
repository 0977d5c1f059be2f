use std::process::{Command, Output};

fn qheap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qheap"))
        .args(args)
        .output()
        .expect("spawn qheap")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn success_prob(o: &Output) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix("success_prob="))
        .expect("summary line")
        .parse()
        .unwrap()
}

#[test]
fn deutsch_rows() {
    let o = qheap(&["deutsch", "--oracle", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0, 0, 1.0\n1, 1, 0.0\n");
    let o = qheap(&["deutsch", "--oracle", "3"]);
    assert!(stdout(&o).lines().any(|l| l == "1, 1, 1.0"));
    for id in ["2", "4"] {
        let o = qheap(&["--sparse", "deutsch", "--oracle", id]);
        assert!(o.status.success());
        assert!(stdout(&o).contains(", 1.0\n"));
    }
}

#[test]
fn deutsch_rejects_bad_oracle() {
    let o = qheap(&["deutsch", "--oracle", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn grover_summary() {
    let o = qheap(&["grover", "--qubits", "3", "--target", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("index,bitstring,probability\n"));
    assert!(text.contains("\n5,101,"));
    assert!(text.contains("success_prob=0.945313\n"));

    let o = qheap(&["grover", "--qubits", "3", "--target", "5", "--channel", "depolarizing", "--p", "1"]);
    assert!((success_prob(&o) - 0.125).abs() < 1e-6);
}

#[test]
fn grover_zero_noise_and_sparse_match_plain_run() {
    let plain = stdout(&qheap(&["grover", "--qubits", "4", "--target", "9"]));
    let zero = stdout(&qheap(&["grover", "--qubits", "4", "--target", "9", "--channel", "bitflip", "--p", "0"]));
    let sparse = stdout(&qheap(&["--sparse", "grover", "--qubits", "4", "--target", "9"]));
    assert_eq!(plain, zero);
    assert_eq!(plain, sparse);
}

#[test]
fn grover_sampling_is_seeded() {
    let args = ["grover", "--qubits", "3", "--target", "2", "--samples", "500", "--seed", "11"];
    let a = stdout(&qheap(&args));
    let b = stdout(&qheap(&args));
    assert_eq!(a, b);
    let counts: Vec<usize> = a
        .split("index,count\n")
        .nth(1)
        .unwrap()
        .lines()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts.iter().sum::<usize>(), 500);
    assert!(counts[2] > 400);
}

#[test]
fn grover_validation() {
    assert_eq!(qheap(&["grover", "--qubits", "3", "--target", "8"]).status.code(), Some(2));
    assert_eq!(
        qheap(&["grover", "--qubits", "3", "--target", "1", "--channel", "depolarizing", "--p", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qheap(&["grover", "--qubits", "3", "--target", "1", "--channel", "nosuch", "--p", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qheap(&["grover", "--qubits", "3", "--target", "1", "--p", "0.1"]).status.code(), Some(2));
}

#[test]
fn sweep_single_point_matches_grover() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one.csv");
    let o = qheap(&[
        "sweep", "--qubits", "3", "--channel", "depolarizing", "--p-start", "0", "--p-end", "0", "--steps", "1",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "qubits,p,success_prob");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&fields[..2], &["3", "0.0"]);
    let v: f64 = fields[2].parse().unwrap();
    let g = success_prob(&qheap(&["grover", "--qubits", "3", "--target", "0"]));
    assert!((v - g).abs() < 5e-7);
}

#[test]
fn sweep_rows_are_monotone_and_sparse_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, sparse: bool| {
        let out = dir.path().join(name);
        let mut args = vec![];
        if sparse {
            args.push("--sparse");
        }
        args.extend([
            "sweep", "--qubits", "4,3", "--channel", "depolarizing", "--p-start", "0", "--p-end", "1", "--steps", "6",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(qheap(&args).status.success());
        std::fs::read_to_string(out).unwrap()
    };
    let dense = run("d.csv", false);
    assert_eq!(dense, run("s.csv", true));
    let rows: Vec<(usize, f64)> = dense
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 12);
    assert!(rows[..6].iter().all(|r| r.0 == 3));
    for block in rows.chunks(6) {
        assert!(block.windows(2).all(|w| w[1].1 <= w[0].1));
    }
}

#[test]
fn sweep_validation_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = qheap(&[
        "sweep", "--qubits", "3", "--channel", "depolarizing", "--p-start", "0", "--p-end", "0", "--steps", "2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let bad = dir.path().join("missing").join("x.csv");
    let o = qheap(&[
        "sweep", "--qubits", "3", "--channel", "depolarizing", "--p-start", "0", "--p-end", "1", "--steps", "2",
        "--out", bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
