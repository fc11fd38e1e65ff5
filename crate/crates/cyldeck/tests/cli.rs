//! End-to-end command-line checks: the shipped surface files agree with the
//! built-in constructors byte for byte, files round trip through parse and
//! write, and the cover checker verifies a real covering from disk.

use cyldeck::cli::run;
use cyldeck::format::{parse_surface, write_surface};
use cyldeck::fixtures;

fn call(args: &[&str]) -> (i32, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = String::new();
    let status = run(&args, &mut out);
    (status, out)
}

fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{}.surf", name.to_lowercase()))
}

#[test]
fn shipped_files_match_constructors_bit_exactly() {
    for name in fixtures::FIXTURE_NAMES {
        let path = fixture_path(name);
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let parsed = parse_surface(&text).unwrap();
        let built = fixtures::by_name(name).unwrap();
        assert_eq!(parsed, built, "{name} content");
        assert_eq!(text, write_surface(&built), "{name} bytes");
    }
}

#[test]
fn commands_accept_file_paths() {
    let path = fixture_path("MNEMONIC");
    let (status, out) = call(&["stratum", path.to_str().unwrap()]);
    assert_eq!(status, 0);
    assert!(out.contains("stratum: H(1,1)"));
    assert!(out.contains("genus: 2"));
}

#[test]
fn deformation_pipeline_through_the_cli() {
    let (status, out) = call(&["collapse", "MNEMONIC", "--direction", "-"]);
    assert_eq!(status, 0);
    assert!(out.contains("t* = 1/2"));
    // The emitted surface block parses back to the collapse result.
    let surface_start = out.find("format_version 1").unwrap();
    let parsed = parse_surface(&out[surface_start..]).unwrap();
    assert_eq!(parsed.cylinders.len(), 2);

    let (status, out) = call(&[
        "continue",
        "MNEMONIC",
        "--direction",
        "-",
        "--time",
        "1/2",
    ]);
    assert_eq!(status, 0);
    assert!(out.contains("result: 3 cylinders"));
}

#[test]
fn cover_check_from_files() {
    let dir = std::env::temp_dir().join("cyldeck-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let assignment = dir.join("bc2-over-quad3.cover");
    // Derive the assignment through the library, serialize it in the CLI's
    // format, and feed it back through the command line.
    let x = fixtures::bc2();
    let y = fixtures::quad3();
    let derived = cyldeck::cover::derive_assignment(&x, &y, |id| match id {
        "C1a" | "C1b" => "C1".to_string(),
        "C2a" | "C2b" => "C2".to_string(),
        _ => "C3".to_string(),
    })
    .unwrap();
    let mut text = String::new();
    let mut keys: Vec<&String> = derived.keys().collect();
    keys.sort();
    for k in keys {
        let spec = &derived[k];
        text.push_str(&format!(
            "map {} {} {} {}\n",
            k,
            spec.quotient_id,
            spec.count,
            cyldeck::format::scalar5(&spec.offset)
        ));
    }
    std::fs::write(&assignment, text).unwrap();
    let (status, out) = call(&["cover-check", "BC2", "QUAD3", assignment.to_str().unwrap()]);
    assert_eq!(status, 0);
    assert!(out.contains("cover: PASS"));
    assert!(out.contains("degree 2"));
    // The witness's quotient block re-parses bit-exactly.
    let surface_start = out.find("format_version 1").unwrap();
    let parsed = parse_surface(&out[surface_start..]).unwrap();
    assert_eq!(parsed, y);

    // Sabotage the assignment: report-level FAIL, still exit zero.
    let bad = dir.join("bad.cover");
    let sab = std::fs::read_to_string(&assignment)
        .unwrap()
        .replace("map C3x C3 2", "map C3x C3 1");
    std::fs::write(&bad, sab).unwrap();
    let (status, out) = call(&["cover-check", "BC2", "QUAD3", bad.to_str().unwrap()]);
    assert_eq!(status, 0);
    assert!(out.contains("cover: FAIL"));
    assert!(out.contains("tiling mismatch"));
}

#[test]
fn svg_render_is_schema_sane() {
    let (status, out) = call(&["render", "MNEMONIC", "--format", "svg"]);
    assert_eq!(status, 0);
    assert!(out.contains("xmlns=\"http://www.w3.org/2000/svg\""));
    assert_eq!(out.matches("<rect").count(), 3);
    assert_eq!(out.matches("<path").count(), 4);
}
