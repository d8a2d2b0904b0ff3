use std::io::Write;
use std::path::Path;

use affine_spheres::families::Mesh;
use tempfile::NamedTempFile;

/// Seventeen significant digits, enough to round-trip any f64.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".into()
    }
}

/// As [`num`], but non-finite values become JSON null.
pub fn json_num(v: f64) -> String {
    if v.is_finite() {
        num(v)
    } else {
        "null".into()
    }
}

pub fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Writes to a temporary file next to `path` and renames it into place, or
/// to standard output when no path is given. A closed pipe on standard
/// output is not an error.
pub fn write_output(path: Option<&Path>, contents: &str) -> std::io::Result<()> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return match out.write_all(contents.as_bytes()).and_then(|()| out.flush()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other,
        };
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn mesh_obj(mesh: &Mesh) -> String {
    let mut s = String::new();
    for v in &mesh.vertices {
        s += &format!("v {} {} {}\n", num(v[0]), num(v[1]), num(v[2]));
    }
    for t in &mesh.triangles {
        s += &format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    s
}

pub fn mesh_csv(mesh: &Mesh) -> String {
    let mut s = String::from("x,y,z\n");
    for v in &mesh.vertices {
        s += &format!("{},{},{}\n", num(v[0]), num(v[1]), num(v[2]));
    }
    s
}

pub fn mesh_json(mesh: &Mesh) -> String {
    let vs: Vec<String> =
        mesh.vertices.iter().map(|v| format!("[{},{},{}]", json_num(v[0]), json_num(v[1]), json_num(v[2]))).collect();
    let ts: Vec<String> = mesh.triangles.iter().map(|t| format!("[{},{},{}]", t[0], t[1], t[2])).collect();
    format!("{{\"vertices\":[{}],\"triangles\":[{}]}}\n", vs.join(","), ts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use affine_spheres::numerics::Vec3;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(json_num(f64::NAN), "null");
    }

    #[test]
    fn obj_is_one_based() {
        let mesh = Mesh::from_grid(vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()], 2, 2);
        let obj = mesh_obj(&mesh);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert!(obj.contains("f 1 2 4"));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        std::fs::write(&path, "old").unwrap();
        write_output(Some(&path), "new").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "new");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
