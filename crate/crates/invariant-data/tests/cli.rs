//! End-to-end tests of the `invariant-data` binary: exit codes, the
//! summary-plus-key=value output contract, and file/name target handling.

use std::path::Path;
use std::process::{Command, Output};

use invariant_core::samples;

fn run(data_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invariant-data"))
        .arg("--data-dir")
        .arg(data_dir)
        .args(args)
        .env_remove("INVARIANT_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn generate_then_validate_is_a_clean_run() {
    let dir = tempfile::tempdir().unwrap();
    let generated = run(
        dir.path(),
        &[
            "generate",
            "--collection",
            "trains",
            "--seed",
            "7",
            "--frames",
            "100",
            "--name",
            "test.trains.t7",
        ],
    );
    assert_eq!(exit_code(&generated), 0, "{generated:?}");
    let out = stdout(&generated);
    assert!(out.contains("stats.time_points=100"), "{out}");
    assert!(out.contains("valid=true"), "{out}");

    let validated = run(dir.path(), &["validate", "test.trains.t7"]);
    assert_eq!(exit_code(&validated), 0);
    assert!(stdout(&validated).contains("collection=trains"));
}

#[test]
fn generate_with_zero_frames_archives_a_valid_empty_set() {
    let dir = tempfile::tempdir().unwrap();
    let generated = run(
        dir.path(),
        &[
            "generate", "--collection", "trains", "--frames", "0", "--name", "test.trains.empty",
        ],
    );
    assert_eq!(exit_code(&generated), 0);
    let validated = run(
        dir.path(),
        &["validate", "test.trains.empty", "--collection", "trains"],
    );
    assert_eq!(exit_code(&validated), 0);
    assert!(stdout(&validated).contains("stats.time_points=0"));
}

#[test]
fn generate_defaults_to_the_archived_sample_count() {
    let dir = tempfile::tempdir().unwrap();
    let generated = run(
        dir.path(),
        &["generate", "--collection", "weather", "--name", "test.weather.default"],
    );
    assert_eq!(exit_code(&generated), 0);
    assert!(stdout(&generated).contains("stats.time_points=439"));
}

#[test]
fn sample_files_validate_for_all_four_collections() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("kinect.txt", samples::KINECT_FRAME, "kinect"),
        ("festo.txt", samples::FESTO_EVENTS, "festo"),
        ("trains.txt", samples::TRAIN_OCCUPANCY, "trains"),
        ("weather.txt", samples::UV_WEATHER, "weather"),
    ];
    for (file, text, collection) in cases {
        let path = dir.path().join(file);
        std::fs::write(&path, text).unwrap();
        let output = run(dir.path(), &["validate", path.to_str().unwrap()]);
        assert_eq!(exit_code(&output), 0, "{file}: {output:?}");
        assert!(
            stdout(&output).contains(&format!("collection={collection}")),
            "{file}"
        );
    }
}

#[test]
fn the_wrong_collection_flag_is_invalid_data() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trains.txt");
    std::fs::write(&path, samples::TRAIN_OCCUPANCY).unwrap();
    let output = run(
        dir.path(),
        &["validate", path.to_str().unwrap(), "--collection", "weather"],
    );
    assert_eq!(exit_code(&output), 1);
    assert!(stdout(&output).contains("valid=false"));
}

#[test]
fn unvalidatable_data_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constant.txt");
    std::fs::write(&path, "TRUE()").unwrap();
    let output = run(dir.path(), &["validate", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn missing_and_corrupt_targets_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run(dir.path(), &["validate", "aicause.never.exists"]);
    assert_eq!(exit_code(&missing), 2);

    run(
        dir.path(),
        &[
            "generate", "--collection", "weather", "--samples", "5", "--name", "test.weather.w5",
        ],
    );
    let archive = dir.path().join("test.weather.w5");
    let bytes = std::fs::read(&archive).unwrap();
    std::fs::write(&archive, &bytes[..bytes.len() / 2]).unwrap();
    let corrupt = run(dir.path(), &["validate", "test.weather.w5"]);
    assert_eq!(exit_code(&corrupt), 2, "{corrupt:?}");
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let unknown_flag = run(dir.path(), &["validate", "--no-such-flag", "x.y"]);
    assert_eq!(exit_code(&unknown_flag), 64);

    let wrong_size_flag = run(
        dir.path(),
        &[
            "generate", "--collection", "kinect", "--frames", "5", "--name", "test.kinect.bad",
        ],
    );
    assert_eq!(exit_code(&wrong_size_flag), 64);

    let bad_name = run(
        dir.path(),
        &["generate", "--collection", "trains", "--frames", "1", "--name", "NoDots"],
    );
    assert_eq!(exit_code(&bad_name), 64);

    let not_a_target = run(dir.path(), &["validate", "no/such/file.txt"]);
    assert_eq!(exit_code(&not_a_target), 64);
}

#[test]
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(exit_code(&run(dir.path(), &["--help"])), 0);
}

#[test]
fn convert_round_trips_between_archive_and_text() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--collection", "festo", "--events", "40", "--name", "test.festo.f40",
        ],
    );
    let archive = dir.path().join("test.festo.f40");
    let as_txt = dir.path().join("roundtrip.txt");
    let back = dir.path().join("roundtrip.archive");

    let to_txt = run(
        dir.path(),
        &["convert", archive.to_str().unwrap(), as_txt.to_str().unwrap(), "--to", "txt"],
    );
    assert_eq!(exit_code(&to_txt), 0, "{to_txt:?}");
    let to_archive = run(
        dir.path(),
        &["convert", as_txt.to_str().unwrap(), back.to_str().unwrap(), "--to", "archive"],
    );
    assert_eq!(exit_code(&to_archive), 0);

    let original = run(dir.path(), &["cat", archive.to_str().unwrap()]);
    let converted = run(dir.path(), &["cat", back.to_str().unwrap()]);
    assert_eq!(exit_code(&converted), 0);
    assert_eq!(stdout(&original), stdout(&converted));
    assert!(stdout(&original).starts_with("BIGAND(List(IMPLIES(AND(TimePoint("));
}

#[test]
fn ls_lists_registry_entries_and_archives() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &["generate", "--collection", "weather", "--samples", "3", "--name", "test.weather.ls"],
    );
    let output = run(dir.path(), &["ls"]);
    assert_eq!(exit_code(&output), 0);
    let out = stdout(&output);
    assert!(
        out.contains("entry=Scan.Kinect.obstacles dataset=aicause.kinect.scan.obstacles1a collection=kinect"),
        "{out}"
    );
    assert!(out.contains("entry=Robotics.Lego.Trains.experiment1"), "{out}");
    assert!(out.contains("archive=test.weather.ls bytes="), "{out}");
}

#[test]
fn ls_honours_a_registry_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("registry.manifest");
    std::fs::write(&manifest, "Custom.series example.custom.series weather\n").unwrap();
    let output = run(
        dir.path(),
        &["--registry", manifest.to_str().unwrap(), "ls"],
    );
    assert_eq!(exit_code(&output), 0);
    assert!(stdout(&output).contains("entry=Custom.series dataset=example.custom.series"));

    let bad = dir.path().join("bad.manifest");
    std::fs::write(&bad, "only-two fields\n").unwrap();
    let output = run(dir.path(), &["--registry", bad.to_str().unwrap(), "ls"]);
    assert_eq!(exit_code(&output), 64);
}

#[test]
fn cat_head_truncates_the_top_level_conjunction() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &["generate", "--collection", "trains", "--frames", "9", "--name", "test.trains.head"],
    );
    let output = run(dir.path(), &["cat", "test.trains.head", "--head", "2"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    let formula = invariant_core::parse(text.trim()).expect("cat output parses");
    match formula {
        invariant_core::Formula::BigAnd(items) => assert_eq!(items.len(), 2),
        other => panic!("unexpected shape: {other:?}"),
    }
}

#[test]
fn inspect_exports_series_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let weather = dir.path().join("weather.txt");
    std::fs::write(&weather, samples::UV_WEATHER).unwrap();
    let output = run(
        dir.path(),
        &["inspect", weather.to_str().unwrap(), "--csv", "uv"],
    );
    assert_eq!(exit_code(&output), 0);
    let out = stdout(&output);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("time,uv_index"));
    assert_eq!(lines.next(), Some("1st December 201511:04AM,7.7"));
    assert_eq!(out.lines().count(), 9);

    let festo = dir.path().join("festo.txt");
    std::fs::write(&festo, samples::FESTO_EVENTS).unwrap();
    let output = run(
        dir.path(),
        &[
            "inspect",
            festo.to_str().unwrap(),
            "--csv",
            "component:stackEmptySensor",
        ],
    );
    assert_eq!(exit_code(&output), 0);
    let out = stdout(&output);
    assert_eq!(out.lines().count(), 5);
    assert!(out.contains("Wed Jul 27 09:11:29 UTC 2016,stackEmptySensor,80.0"));

    // Asking a trains dataset for a UV series is invalid data, not usage.
    let trains = dir.path().join("trains.txt");
    std::fs::write(&trains, samples::TRAIN_OCCUPANCY).unwrap();
    let output = run(dir.path(), &["inspect", trains.to_str().unwrap(), "--csv", "uv"]);
    assert_eq!(exit_code(&output), 1);
    let times = run(
        dir.path(),
        &["inspect", trains.to_str().unwrap(), "--csv", "times"],
    );
    assert_eq!(exit_code(&times), 0);
    assert!(stdout(&times).contains("1429188806320"));
}

#[test]
fn inspect_reports_collection_and_time_range() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trains.txt");
    std::fs::write(&path, samples::TRAIN_OCCUPANCY).unwrap();
    let output = run(dir.path(), &["inspect", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let out = stdout(&output);
    assert!(out.contains("collection=trains"), "{out}");
    assert!(out.contains("first_time=1429188806320"), "{out}");
    assert!(out.contains("last_time=1429188807191"), "{out}");
}
