//! Plain-text formats for instances, point sets, PCPs and hypergraphs.
//!
//! Every format is line based: a header line naming the format, then one
//! record per line. Blank lines and `#` comments are ignored on input.
//!
//! ```text
//! jc <n> <z> <y> <k>            edge per line: 1 2 3 (commas also accepted)
//! pts <dim> <metric> <exp> <k>  optional `meta β ℓ q λ p slack`, then
//!                               `label v1 … vdim` per point, then an
//!                               optional `centers` line and center records
//! pcp <ell>                     `layer <i> <size> <alphabet>` per layer,
//!                               `edge <i> <j> <vi> <vj> <π(0)> … <π(|Σj|−1)>`
//! sigma <ell>                   `<layer> <label of vertex 0> <label of vertex 1> …`
//! whg3 <m>                      `a b c weight`, vertices as layer:vertex:cube
//! hg3 <m>                       `a b c`, vertices as layer:vertex:cube#copy
//! ```

use std::io::{BufRead, Write};
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hvc::{DenseHypergraph, HvcVertex, LayeredPcp, PcpEdge, WeightedHypergraph3};
use crate::johnson::JohnsonInstance;
use crate::metric::Metric;
use crate::reduce::{ClusteringInstance, LabeledPoint, ReductionMeta};
use crate::subset::Subset;

/// Non-empty, comment-stripped lines with 1-based line numbers.
fn records<R: BufRead>(input: R) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if !body.is_empty() {
            out.push((i + 1, body.to_string()));
        }
    }
    Ok(out)
}

fn field<T: FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {tok:?}")))
}

fn header<'a>(
    recs: &'a [(usize, String)],
    tag: &str,
) -> Result<(usize, std::str::SplitWhitespace<'a>)> {
    let (line, text) = recs
        .first()
        .ok_or_else(|| Error::parse(0, format!("empty input, expected `{tag}` header")))?;
    let mut toks = text.split_whitespace();
    if toks.next() != Some(tag) {
        return Err(Error::parse(*line, format!("expected `{tag}` header")));
    }
    Ok((*line, toks))
}

fn no_trailing(line: usize, mut toks: std::str::SplitWhitespace<'_>) -> Result<()> {
    match toks.next() {
        Some(t) => Err(Error::parse(
            line,
            format!("unexpected trailing field {t:?}"),
        )),
        None => Ok(()),
    }
}

pub fn write_jc<W: Write>(inst: &JohnsonInstance, mut out: W) -> Result<()> {
    writeln!(
        out,
        "jc {} {} {} {}",
        inst.n(),
        inst.z(),
        inst.y(),
        inst.k()
    )?;
    for e in inst.edges() {
        let elems: Vec<String> = e.elems().iter().map(u32::to_string).collect();
        writeln!(out, "{}", elems.join(" "))?;
    }
    Ok(())
}

pub fn read_jc<R: BufRead>(input: R) -> Result<JohnsonInstance> {
    let recs = records(input)?;
    let (line, mut toks) = header(&recs, "jc")?;
    let n = field(line, toks.next(), "n")?;
    let z = field(line, toks.next(), "z")?;
    let y = field(line, toks.next(), "y")?;
    let k = field(line, toks.next(), "k")?;
    no_trailing(line, toks)?;
    let edges = recs[1..]
        .iter()
        .map(|(l, text)| {
            let elems = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| field(*l, Some(t), "element"))
                .collect::<Result<Vec<u32>>>()?;
            Subset::new(elems).map_err(|e| Error::parse(*l, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    JohnsonInstance::new(n, z, y, k, edges)
}

fn write_vectors<W: Write>(out: &mut W, pts: &[LabeledPoint]) -> Result<()> {
    for p in pts {
        write!(out, "{}", p.label)?;
        for c in &p.coords {
            write!(out, " {c}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_pts<W: Write>(ci: &ClusteringInstance, mut out: W) -> Result<()> {
    writeln!(
        out,
        "pts {} {} {} {}",
        ci.dim(),
        ci.metric,
        ci.exponent,
        ci.k
    )?;
    if let Some(m) = &ci.meta {
        writeln!(
            out,
            "meta {} {} {} {} {} {}",
            m.beta, m.ell, m.q, m.lambda, m.p, m.slack
        )?;
    }
    write_vectors(&mut out, &ci.points)?;
    if !ci.centers.is_empty() {
        writeln!(out, "centers")?;
        write_vectors(&mut out, &ci.centers)?;
    }
    Ok(())
}

pub fn read_pts<R: BufRead>(input: R) -> Result<ClusteringInstance> {
    let recs = records(input)?;
    let (line, mut toks) = header(&recs, "pts")?;
    let dim: usize = field(line, toks.next(), "dim")?;
    let metric: Metric = field(line, toks.next(), "metric")?;
    let exponent = field(line, toks.next(), "exponent")?;
    let k = field(line, toks.next(), "k")?;
    no_trailing(line, toks)?;
    let mut meta = None;
    let mut points = Vec::new();
    let mut centers = Vec::new();
    let mut in_centers = false;
    for (l, text) in &recs[1..] {
        let mut toks = text.split_whitespace();
        let first = toks.next().expect("non-empty record");
        if first == "meta" && points.is_empty() && meta.is_none() {
            meta = Some(ReductionMeta {
                beta: field(*l, toks.next(), "beta")?,
                ell: field(*l, toks.next(), "ell")?,
                q: field(*l, toks.next(), "q")?,
                lambda: field(*l, toks.next(), "lambda")?,
                p: field(*l, toks.next(), "p")?,
                slack: field(*l, toks.next(), "slack")?,
            });
            no_trailing(*l, toks)?;
            continue;
        }
        if first == "centers" && !in_centers {
            no_trailing(*l, toks)?;
            in_centers = true;
            continue;
        }
        let coords = toks
            .map(|t| field::<f64>(*l, Some(t), "coordinate"))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != dim {
            return Err(Error::parse(
                *l,
                format!("{} coordinates, header says {dim}", coords.len()),
            ));
        }
        let p = LabeledPoint {
            label: first.to_string(),
            coords,
        };
        if in_centers {
            centers.push(p);
        } else {
            points.push(p);
        }
    }
    ClusteringInstance::new(points, centers, k, metric, exponent, meta)
}

pub fn write_pcp<W: Write>(pcp: &LayeredPcp, mut out: W) -> Result<()> {
    writeln!(out, "pcp {}", pcp.ell)?;
    for layer in 1..=pcp.ell {
        writeln!(
            out,
            "layer {layer} {} {}",
            pcp.size(layer),
            pcp.alphabet(layer)
        )?;
    }
    for e in &pcp.edges {
        write!(out, "edge {} {} {} {}", e.i, e.j, e.vi, e.vj)?;
        for a in &e.projection {
            write!(out, " {a}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_pcp<R: BufRead>(input: R) -> Result<LayeredPcp> {
    let recs = records(input)?;
    let (line, mut toks) = header(&recs, "pcp")?;
    let ell: u32 = field(line, toks.next(), "ell")?;
    no_trailing(line, toks)?;
    let mut sizes = vec![None; ell as usize];
    let mut alphabets = vec![0; ell as usize];
    let mut edges = Vec::new();
    for (l, text) in &recs[1..] {
        let mut toks = text.split_whitespace();
        match toks.next() {
            Some("layer") => {
                let i: u32 = field(*l, toks.next(), "layer index")?;
                if i == 0 || i > ell {
                    return Err(Error::parse(*l, format!("layer {i} outside 1..={ell}")));
                }
                if sizes[i as usize - 1].is_some() {
                    return Err(Error::parse(*l, format!("layer {i} declared twice")));
                }
                sizes[i as usize - 1] = Some(field(*l, toks.next(), "layer size")?);
                alphabets[i as usize - 1] = field(*l, toks.next(), "alphabet size")?;
                no_trailing(*l, toks)?;
            }
            Some("edge") => {
                let i = field(*l, toks.next(), "i")?;
                let j = field(*l, toks.next(), "j")?;
                let vi = field(*l, toks.next(), "vi")?;
                let vj = field(*l, toks.next(), "vj")?;
                let projection = toks
                    .map(|t| field(*l, Some(t), "projection value"))
                    .collect::<Result<Vec<u32>>>()?;
                edges.push(PcpEdge {
                    i,
                    j,
                    vi,
                    vj,
                    projection,
                });
            }
            other => {
                return Err(Error::parse(
                    *l,
                    format!("expected `layer` or `edge`, got {other:?}"),
                ));
            }
        }
    }
    let sizes = sizes
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| Error::parse(line, format!("layer {} not declared", i + 1))))
        .collect::<Result<Vec<u32>>>()?;
    LayeredPcp::new(ell, sizes, alphabets, edges)
}

pub fn read_assignment<R: BufRead>(input: R, pcp: &LayeredPcp) -> Result<Vec<Vec<u32>>> {
    let recs = records(input)?;
    let (line, mut toks) = header(&recs, "sigma")?;
    let ell: u32 = field(line, toks.next(), "ell")?;
    no_trailing(line, toks)?;
    if ell != pcp.ell {
        return Err(Error::parse(
            line,
            format!("assignment has {ell} layers, PCP has {}", pcp.ell),
        ));
    }
    let mut rows = vec![None; ell as usize];
    for (l, text) in &recs[1..] {
        let mut toks = text.split_whitespace();
        let i: u32 = field(*l, toks.next(), "layer")?;
        if i == 0 || i > ell || rows[i as usize - 1].is_some() {
            return Err(Error::parse(
                *l,
                format!("layer {i} missing from range or repeated"),
            ));
        }
        rows[i as usize - 1] = Some(
            toks.map(|t| field(*l, Some(t), "label"))
                .collect::<Result<Vec<u32>>>()?,
        );
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| Error::parse(line, format!("layer {} has no labels", i + 1))))
        .collect()
}

pub fn write_assignment<W: Write>(sigma: &[Vec<u32>], mut out: W) -> Result<()> {
    writeln!(out, "sigma {}", sigma.len())?;
    for (i, row) in sigma.iter().enumerate() {
        write!(out, "{}", i + 1)?;
        for a in row {
            write!(out, " {a}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_whg3<W: Write>(hg: &WeightedHypergraph3, mut out: W) -> Result<()> {
    writeln!(out, "whg3 {}", hg.len())?;
    for t in &hg.triples {
        let [a, b, c] = t.vertices;
        writeln!(out, "{a} {b} {c} {}", t.weight)?;
    }
    Ok(())
}

pub fn read_whg3<R: BufRead>(input: R) -> Result<WeightedHypergraph3> {
    let recs = records(input)?;
    let (line, mut toks) = header(&recs, "whg3")?;
    let m: usize = field(line, toks.next(), "triple count")?;
    no_trailing(line, toks)?;
    if recs.len() - 1 != m {
        return Err(Error::parse(
            line,
            format!("header says {m} triples, found {}", recs.len() - 1),
        ));
    }
    let list = recs[1..]
        .iter()
        .map(|(l, text)| {
            let mut toks = text.split_whitespace();
            let a: HvcVertex = field(*l, toks.next(), "vertex")?;
            let b: HvcVertex = field(*l, toks.next(), "vertex")?;
            let c: HvcVertex = field(*l, toks.next(), "vertex")?;
            let w: BigRational = field(*l, toks.next(), "weight")?;
            no_trailing(*l, toks)?;
            Ok(([a, b, c], w))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedHypergraph3::from_triples(list)
}

pub fn write_hg3<W: Write>(hg: &DenseHypergraph, mut out: W) -> Result<()> {
    writeln!(out, "hg3 {}", hg.edges.len())?;
    for [a, b, c] in &hg.edges {
        writeln!(out, "{a} {b} {c}")?;
    }
    Ok(())
}
