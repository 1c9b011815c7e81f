use std::io::Read;

use costshare::classes::{self, FixtureParams};
use costshare::instance::GraphDocument;
use costshare::{rational, Error, Graph, Instance, Rational, Terminals, VertexId};

use crate::{CliError, Source};

/// A graph with whatever terminals and costs the input supplied.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub graph: Graph,
    pub terminals: Option<Terminals>,
    pub costs: Option<Vec<Rational>>,
}

impl Loaded {
    pub fn instance(&self) -> Result<Instance, CliError> {
        let t = self.require_terminals()?;
        let costs = self
            .costs
            .clone()
            .ok_or_else(|| Error::invalid("edges[].cost", "this command needs a cost on every edge"))?;
        Ok(Instance::new(self.graph.clone(), t, costs)?)
    }

    pub fn require_terminals(&self) -> Result<Terminals, CliError> {
        self.terminals
            .ok_or_else(|| Error::invalid("terminals", "missing; pass --terminals s1,t1,s2,t2").into())
    }
}

pub fn parse_rational(field: &str, s: &str) -> Result<Rational, CliError> {
    rational::parse(s).map_err(|e| Error::invalid(field, e.to_string()).into())
}

pub fn load(source: &Source) -> Result<Loaded, CliError> {
    let mut loaded = match (&source.input, &source.fixture) {
        (Some(path), _) => {
            let text = read_input(path)?;
            let doc = GraphDocument::from_json(&text)?;
            let costs = if doc.costs.iter().all(Option::is_some) {
                Some(doc.costs.into_iter().flatten().collect())
            } else {
                None
            };
            Loaded {
                graph: doc.graph,
                terminals: doc.terminals,
                costs,
            }
        }
        (None, Some(id)) => from_fixture(id, source)?,
        (None, None) => return Err(CliError::Usage("pass --input or --fixture".into())),
    };
    if let Some(names) = &source.terminals {
        loaded.terminals = Some(terminals_by_name(&loaded.graph, names)?);
    }
    Ok(loaded)
}

fn read_input(path: &std::path::Path) -> Result<String, CliError> {
    let mut text = String::new();
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(io)?;
    } else {
        text = std::fs::read_to_string(path).map_err(io)?;
    }
    Ok(text)
}

fn from_fixture(id: &str, source: &Source) -> Result<Loaded, CliError> {
    if let Some((family, n)) = classes::parse_family_id(id) {
        return Ok(Loaded {
            graph: family.generate(n)?,
            terminals: None,
            costs: None,
        });
    }
    let params = FixtureParams {
        x: parse_rational("--x", &source.x)?,
        eps: parse_rational("--eps", &source.eps)?,
    };
    let inst = classes::fixture(id, &params)?;
    Ok(Loaded {
        graph: inst.graph().clone(),
        terminals: Some(inst.terminals()),
        costs: Some(inst.costs().to_vec()),
    })
}

fn terminals_by_name(g: &Graph, names: &[String]) -> Result<Terminals, CliError> {
    let field = ["s1", "t1", "s2", "t2"];
    if names.len() != 4 {
        return Err(Error::invalid("--terminals", format!("expected s1,t1,s2,t2, got {} names", names.len())).into());
    }
    let v: Vec<VertexId> = names
        .iter()
        .zip(field)
        .map(|(n, f)| {
            g.find_vertex(n)
                .ok_or_else(|| Error::invalid(format!("--terminals {f}"), format!("unknown vertex {n:?}")))
        })
        .collect::<Result<_, _>>()?;
    let t = Terminals {
        s1: v[0],
        t1: v[1],
        s2: v[2],
        t2: v[3],
    };
    t.validate(g)?;
    Ok(t)
}
