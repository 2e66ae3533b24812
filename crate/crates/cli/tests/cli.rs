use std::fs;
use std::path::Path;

use cswalls_cli::cache::{CacheKey, WallCache};
use cswalls_cli::svg::render_svg;
use cswalls_cli::{run_with_config, Outcome};
use cswalls_core::rational::int;
use cswalls_core::walls::{chamber_decomposition, ChamberReport, EndKind, Verdict, Verdicts};
use cswalls_core::{
    enumerate_walls, make_model, BNModel, ClassificationResult, Genus, ModelKind, NumClass, PlanePoint, RationalLine, Slope,
    Wall, Window,
};

fn run(args: &[&str]) -> Outcome {
    run_with_config(std::iter::once("cswalls").chain(args.iter().copied()), None)
}

fn run_cfg(args: &[&str], config: &Path) -> Outcome {
    run_with_config(std::iter::once("cswalls").chain(args.iter().copied()), Some(config))
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

fn general(g: i64) -> BNModel {
    make_model(ModelKind::General, Genus::new(g).unwrap(), None).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["euler", "--genus", "2", "--v1", "0,0,1", "--v2", "1,0,0"]), "1\n");
    assert_eq!(ok(&["serre", "--genus", "2", "--class", "0,0,1"]), "1,2,2\n");
    assert_eq!(ok(&["dual", "--class", "0,0,1"]), "1,0,1\n");
    assert_eq!(ok(&["mutate", "--genus", "3", "--by", "0,0,1", "--class", "2,5,1"]), "2,5,1\n");
    assert_eq!(ok(&["project", "--class", "2,3,1"]), "3/2,1/2\n");
    assert_eq!(ok(&["ray", "--class", "2,3,1", "--alpha", "1"]), "1*b + 1*w = 2\n");
    assert_eq!(ok(&["nu", "--class", "1,1,1", "--point", "1,1"]), "inf\n");
    assert_eq!(ok(&["mualpha", "--class", "0,1,2", "--alpha", "1/2"]), "inf\n");
    assert_eq!(ok(&["feasible", "--genus", "5", "--class", "1,1,3"]), "Excluded\n");
    assert_eq!(ok(&["region", "--point", "-1,1/2"]), "In\n");
    assert_eq!(ok(&["bn", "--genus", "3", "--x", "1"]), "lower 0\nupper 3/2\n");
}

#[test]
fn exit_codes_follow_the_error_kind() {
    let parse = run(&["euler", "--v1", "1,2", "--v2", "1,0,0"]);
    assert_eq!(parse.code, 2);
    assert!(parse.stdout.is_empty() && !parse.stderr.is_empty());
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["walls", "--model", "mercat", "--genus", "3", "--class", "1,0,0"]).code, 2);
    assert_eq!(run(&["walls", "--window", "1,0,1,2", "--class", "1,0,0"]).code, 2);

    let domain = run(&["project", "--class", "0,1,0"]);
    assert_eq!(domain.code, 1);
    assert!(domain.stderr.starts_with("error: "));
    assert_eq!(run(&["mutate", "--by", "1,0,0", "--class", "2,3,1"]).code, 1);
    assert_eq!(run(&["ray", "--class", "2,3,1", "--alpha", "0"]).code, 1);
    assert_eq!(run(&["region", "--uf", "--genus", "3", "--point", "1,1"]).code, 1);
    assert_eq!(run(&["glue", "--point", "1,1"]).code, 1);

    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("walls"));
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, r#"{"genus": 3, "format": "json"}"#).unwrap();
    let out = run_cfg(&["euler", "--v1", "0,0,1", "--v2", "1,0,0"], &cfg);
    assert_eq!(out.stdout, "\"2\"\n");
    let out = run_cfg(&["euler", "--genus", "4", "--format", "text", "--v1", "0,0,1", "--v2", "1,0,0"], &cfg);
    assert_eq!(out.stdout, "3\n");

    fs::write(&cfg, r#"{"genus": 3, "colour": "red"}"#).unwrap();
    assert_eq!(run_cfg(&["dual", "--class", "1,0,0"], &cfg).code, 2);
    assert_eq!(run_cfg(&["dual", "--class", "1,0,0"], &dir.path().join("missing.json")).code, 2);
}

#[test]
fn walls_render_in_every_format() {
    let base = ["walls", "--class", "2,3,1", "--window", "-3,3,1/2,6"];
    let json = ok(&[&base[..], &["--format", "json"]].concat());
    let walls: Vec<Wall> = serde_json::from_str(&json).unwrap();
    assert_eq!(walls, enumerate_walls(&NumClass::new(2, 3, 1), Genus::new(2).unwrap(), &Window::parse("-3,3,1/2,6").unwrap(), 3, &general(2)));
    assert!(!json.contains('.'), "rationals must not be rendered as floats");

    let csv = ok(&[&base[..], &["--format", "csv"]].concat());
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), walls.len());
    for (row, w) in rows.iter().zip(&walls) {
        let joined: Vec<String> = w.destabilizers.iter().map(NumClass::to_string).collect();
        assert_eq!(&row[8], joined.join(";"));
        assert_eq!(&row[0], w.nu.to_string());
    }

    let text = ok(&base);
    assert!(text.starts_with("class 2,3,1, genus 2, model general, window -3,3,1/2,6, rank bound 3: "));
    assert_eq!(text.lines().count(), walls.len() + 1);

    let unpruned: Vec<Wall> = serde_json::from_str(&ok(&[&base[..], &["--format", "json", "--no-prune"]].concat())).unwrap();
    assert!(unpruned.len() > walls.len());
}

#[test]
fn results_round_trip_through_json() {
    let chambers: ChamberReport = serde_json::from_str(&ok(&["chambers", "--class", "2,3,1", "--format", "json"])).unwrap();
    let window = Window::parse("-4,4,1/4,8").unwrap();
    let v = NumClass::new(2, 3, 1);
    let walls = enumerate_walls(&v, Genus::new(2).unwrap(), &window, 3, &general(2));
    assert_eq!(chambers, chamber_decomposition(&v, &walls, &window, &general(2)).unwrap());

    let model: BNModel = serde_json::from_str(&ok(&["bn", "--genus", "5", "--model", "mercat", "--format", "json"])).unwrap();
    assert_eq!(model, make_model(ModelKind::Mercat, Genus::new(5).unwrap(), None).unwrap());

    let args = ["classify", "--z1=-1,0", "--z2=0,1", "--z3=3,2", "--lifts", "1,1/2,0.18716704181099883", "--flags", "stable_O0,stable_pt,stable_sheafO"];
    let res: ClassificationResult = serde_json::from_str(&ok(&[&args[..], &["--format", "json"]].concat())).unwrap();
    assert_eq!(res.typeb.unwrap().point, PlanePoint::new(int(-2), int(3)));
    assert!(ok(&args).starts_with("in_UA Yes\nin_UB Yes\n"));
}

#[test]
fn user_models_load_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    fs::write(&path, r#"{"lower": [["-1","0","0"],["1","1","0"]], "upper": [["-1","0","0"],["0","1/2","1"],["2","1","1","2"]], "exact": false}"#).unwrap();
    let model = format!("user:{}", path.display());
    assert_eq!(ok(&["bn", "--model", &model, "--x", "1"]), "lower 0\nupper 3/2\n");
    fs::write(&path, "not json").unwrap();
    assert_eq!(run(&["bn", "--model", &model]).code, 2);
}

fn wall(destabilizer: (i64, i64, i64), line: (i64, i64, i64), from: (i64, i64), to: (i64, i64)) -> Wall {
    let pass = Verdicts { im_positive: Verdict::Pass, q_nonneg: Verdict::Pass, feasibility: Verdict::Unknown, region: Verdict::Unknown };
    let p = |(b, w): (i64, i64)| PlanePoint::new(int(b), int(w));
    Wall {
        destabilizers: vec![NumClass::new(destabilizer.0, destabilizer.1, destabilizer.2)],
        line: RationalLine::new(line.0.into(), line.1.into(), line.2.into()).unwrap(),
        nu: Slope::Finite(int(-1)),
        segment: [p(from), p(to)],
        verdicts: pass,
        owner: NumClass::new(2, 3, 1),
        ends: [EndKind::Window, EndKind::Heart],
    }
}

#[test]
fn svg_without_walls_has_only_the_frame() {
    let window = Window::parse("-3,3,1/2,6").unwrap();
    let svg = render_svg(&NumClass::new(2, 3, 1), &[], &window, &general(2));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let count = |tag: &str| doc.descendants().filter(|n| n.has_tag_name(tag)).count();
    assert_eq!(doc.descendants().filter(|n| n.attribute("class") == Some("wall")).count(), 0);
    assert_eq!(count("polyline"), 2);
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("axes")));
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("legend")));
    assert_eq!(doc.root_element().attribute("viewBox"), Some("0 0 800 672"));
}

#[test]
fn walls_sharing_a_line_merge_into_one_polyline() {
    let window = Window::parse("-3,3,1/2,6").unwrap();
    let walls = [wall((1, 1, 1), (1, 1, 2), (-1, 3), (0, 2)), wall((3, 4, 3), (1, 1, 2), (0, 2), (1, 1))];
    let svg = render_svg(&NumClass::new(2, 3, 1), &walls, &window, &general(2));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let polylines: Vec<_> = doc.descendants().filter(|n| n.attribute("class") == Some("wall")).collect();
    assert_eq!(polylines.len(), 1);
    assert_eq!(polylines[0].attribute("data-line"), Some("1,1,2"));
    assert_eq!(polylines[0].attribute("points"), Some("266.666667,327.272727 533.333333,545.454545"));
    let legend: Vec<&str> = doc.descendants().filter(|n| n.has_tag_name("text")).filter_map(|n| n.text()).collect();
    let merged: Vec<&&str> = legend.iter().filter(|t| t.contains("1*b + 1*w = 2")).collect();
    assert_eq!(merged.len(), 1);
    assert!(merged[0].contains("(1,1,1) (3,4,3)"));
    assert!(doc.descendants().any(|n| n.attribute("class") == Some("projection")));
}

#[test]
fn plot_writes_files_and_reports_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walls.svg");
    let p = path.to_str().unwrap();
    let out = run(&["plot", "--class", "2,3,1", "--out", p]);
    assert_eq!(out.code, 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), ok(&["plot", "--class", "2,3,1"]));
    let bad = dir.path().join("missing").join("walls.svg");
    let out = run(&["plot", "--class", "2,3,1", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("i/o error"));
}

#[test]
fn cache_entries_are_verified_before_use() {
    let dir = tempfile::tempdir().unwrap();
    let cache = WallCache::new(dir.path());
    let window = Window::parse("-3,3,1/2,6").unwrap();
    let model = general(2);
    let v = NumClass::new(2, 3, 1);
    let key = CacheKey::new(&v, 2, &window, 3, &model, true);
    assert!(cache.load(&key).is_none());
    let walls = vec![wall((1, 1, 1), (1, 1, 2), (-1, 3), (0, 2))];
    cache.store(&key, &walls).unwrap();
    assert_eq!(cache.load(&key), Some(walls.clone()));

    let other = CacheKey::new(&v, 2, &window, 2, &model, true);
    assert_ne!(cache.path(&other), cache.path(&key));
    assert!(cache.load(&other).is_none());
    let mut stale = key.clone();
    stale.version = "0.0.0".into();
    fs::copy(cache.path(&key), cache.path(&stale)).unwrap();
    assert!(cache.load(&stale).is_none(), "an entry for a different key must not be trusted");

    fs::write(cache.path(&key), "{").unwrap();
    assert!(cache.load(&key).is_none());

    let dir_str = dir.path().to_str().unwrap();
    let args = ["walls", "--class", "2,3,1", "--window", "-3,3,1/2,6", "--cache-dir", dir_str];
    let fresh = ok(&[&args[..], &["--no-cache"]].concat());
    assert_eq!(ok(&args), fresh);
    assert_eq!(ok(&args), fresh);
    let files = fs::read_dir(dir.path()).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")).count();
    assert_eq!(files, 2);
    let repaired = cache.load(&key).expect("the corrupt entry is rewritten");
    assert_eq!(repaired, enumerate_walls(&v, Genus::new(2).unwrap(), &window, 3, &model));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["walls", "--class", "-1,2,-3", "--genus", "3", "--format", "csv"][..],
        &["chambers", "--class", "2,3,1", "--format", "json"],
        &["plot", "--class", "0,3,2", "--window", "-2,3,1/4,4"],
        &["bn", "--genus", "6", "--model", "mercat"],
    ] {
        assert_eq!(run(args), run(args));
    }
}
