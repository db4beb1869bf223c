use std::path::PathBuf;

use anisofem::bench::{graded_family, uniform_family, Domain};
use anisofem::mesh::{load_mesh, Grading, Mesh};

/// Source of the mesh sequence of a benchmark run.
#[derive(Clone, Debug, PartialEq)]
pub enum MeshSpec {
    Uniform(Vec<usize>),
    /// `(n, strength)` per level.
    Graded(Vec<(usize, f64)>),
    Files(Vec<PathBuf>),
}

impl MeshSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once(':').ok_or("expected KIND:LIST")?;
        let items = rest.split(',').map(str::trim).filter(|t| !t.is_empty());
        let count = |t: &str| t.parse::<usize>().map_err(|_| format!("invalid subdivision count `{t}`"));
        match kind {
            "uniform" => Ok(Self::Uniform(items.map(count).collect::<Result<_, _>>()?)),
            "graded" => Ok(Self::Graded(
                items
                    .map(|t| {
                        let (n, s) = t.split_once('x').ok_or_else(|| format!("graded level `{t}` must be NxSTRENGTH"))?;
                        let s = s.parse::<f64>().map_err(|_| format!("invalid strength `{s}`"))?;
                        Ok((count(n)?, s))
                    })
                    .collect::<Result<_, String>>()?,
            )),
            "files" => Ok(Self::Files(items.map(PathBuf::from).collect())),
            other => Err(format!("unknown mesh family `{other}` (uniform, graded, files)")),
        }
    }

    pub fn build(
        &self,
        domain: Domain<f64>,
        angle: f64,
        target: f64,
        width: f64,
    ) -> Result<Vec<Mesh<f64>>, Box<dyn std::error::Error>> {
        Ok(match self {
            Self::Uniform(ns) => uniform_family(domain, ns)?,
            Self::Graded(levels) => {
                let levels: Vec<_> =
                    levels.iter().map(|&(n, s)| (n, Grading::toward(angle, target, s, width))).collect();
                graded_family(domain, &levels)?
            }
            Self::Files(paths) => paths
                .iter()
                .map(|p| load_mesh(p).map_err(|e| format!("{}: {e}", p.display())))
                .collect::<Result<_, _>>()?,
        })
    }
}
