mod common;

use std::path::Path;

use tempfile::TempDir;
use uvlfix::{discover, scan_tree, ScanError};
use uvlfix_core::Status;

use common::write;

fn rels(root: &Path) -> Vec<String> {
    discover(root)
        .unwrap()
        .records
        .into_iter()
        .map(|r| r.relative_path)
        .collect()
}

#[test]
fn empty_directory_has_no_records() {
    let tmp = TempDir::new().unwrap();
    assert!(discover(tmp.path()).unwrap().records.is_empty());
}

#[test]
fn extension_filter_and_ordering() {
    let tmp = TempDir::new().unwrap();
    let root = tmp.path();
    write(&root.join("ds1/sub/b.uvl"), b"features\n\tB\n");
    write(&root.join("ds1/a.uvl"), b"features\n\tA\n");
    write(&root.join("ds2/c.txt"), b"nope");
    let scan = discover(root).unwrap();
    let got: Vec<(&str, &str)> = scan
        .records
        .iter()
        .map(|r| (r.dataset.as_str(), r.relative_path.as_str()))
        .collect();
    assert_eq!(got, [("ds1", "ds1/a.uvl"), ("ds1", "ds1/sub/b.uvl")]);
    assert!(scan.records.iter().all(|r| r.absolute_path.is_absolute()));
    assert!(scan.problems.is_empty());
}

#[test]
fn files_directly_under_root_take_the_root_name() {
    let tmp = TempDir::new().unwrap();
    let root = tmp.path().join("corpus");
    write(&root.join("top.UVL"), b"features\n\tA\n");
    write(&root.join("ds/x.uvl"), b"features\n\tA\n");
    let scan = discover(&root).unwrap();
    assert_eq!(scan.records[0].relative_path, "ds/x.uvl");
    assert_eq!(scan.records[1].dataset, "corpus");
    assert_eq!(scan.records[1].file_ref().file_in_dataset(), "top.UVL");
}

#[test]
fn byte_order_not_locale_order() {
    let tmp = TempDir::new().unwrap();
    for name in ["b.uvl", "B.uvl", "a.uvl", "_.uvl", "Z/z.uvl"] {
        write(&tmp.path().join(name), b"features\n\tA\n");
    }
    assert_eq!(
        rels(tmp.path()),
        ["B.uvl", "Z/z.uvl", "_.uvl", "a.uvl", "b.uvl"]
    );
}

#[test]
fn missing_root_is_a_hard_error() {
    let tmp = TempDir::new().unwrap();
    assert!(matches!(
        discover(&tmp.path().join("nope")),
        Err(ScanError::MissingRoot(_))
    ));
    write(&tmp.path().join("f.uvl"), b"");
    assert!(matches!(
        discover(&tmp.path().join("f.uvl")),
        Err(ScanError::NotADirectory(_))
    ));
}

#[cfg(unix)]
#[test]
fn symlinks_are_not_followed() {
    let tmp = TempDir::new().unwrap();
    let root = tmp.path();
    write(&root.join("ds/a.uvl"), b"features\n\tA\n");
    std::os::unix::fs::symlink(root, root.join("ds/loop")).unwrap();
    std::os::unix::fs::symlink(root.join("ds/a.uvl"), root.join("ds/link.uvl")).unwrap();
    assert_eq!(rels(root), ["ds/a.uvl"]);
}

#[test]
fn twenty_datasets_are_counted_exactly() {
    let tmp = TempDir::new().unwrap();
    let mut expected = 0;
    for d in 0..20 {
        for f in 0..(d % 6 + 1) {
            let depth = if f % 3 == 0 { "deep/er/" } else { "" };
            write(
                &tmp.path().join(format!("set{d:02}/{depth}m{f}.uvl")),
                b"features\n\tA\n",
            );
            expected += 1;
        }
        write(&tmp.path().join(format!("set{d:02}/notes.md")), b"");
    }
    let scan = discover(tmp.path()).unwrap();
    assert_eq!(scan.records.len(), expected);
    let datasets: std::collections::BTreeSet<_> =
        scan.records.iter().map(|r| r.dataset.clone()).collect();
    assert_eq!(datasets.len(), 20);
}

#[test]
fn scans_are_deterministic() {
    let tmp = TempDir::new().unwrap();
    common::clean_corpus(tmp.path(), 40, 1);
    let (a, fa) = scan_tree(tmp.path()).unwrap();
    let (b, fb) = scan_tree(tmp.path()).unwrap();
    assert_eq!(a.records, b.records);
    assert_eq!(fa, fb);
    assert!(fa.iter().all(|f| f.status == Status::Ok));
}

#[cfg(unix)]
#[test]
fn unreadable_files_become_io_exceptions() {
    use std::os::unix::fs::PermissionsExt;
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("ds/locked.uvl");
    write(&path, b"features\n\tA\n");
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o000)).unwrap();
    if std::fs::read(&path).is_ok() {
        // Running as root; permissions are not enforced.
        return;
    }
    let (_, analyses) = scan_tree(tmp.path()).unwrap();
    assert_eq!(analyses[0].status, Status::Exception);
    assert_eq!(
        analyses[0].diagnostics[0].category,
        uvlfix_core::Category::Io
    );
}
