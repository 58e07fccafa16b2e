use crate::error::{Error, Result};
use crate::formula::{MorleyKind, MorleyizationResult};

use super::{index_tuple, tuple_count, Compiled, FinStructure};

/// The expansion of `m` to the Morleyized signature fixed by the emitted
/// axioms. A relation symbol is read off its defining formula; a Skolem symbol
/// picks the least witness, defaulting to the first argument (or element 0
/// for a nullary symbol) when there is none.
pub fn expand_morley(m: &FinStructure, mr: &MorleyizationResult) -> Result<FinStructure> {
    if m.signature() != &mr.base {
        return Err(Error::SignatureMismatch(
            "structure is not over the base signature of the Morleyization".into(),
        ));
    }
    let n = m.size();
    let mut relations: Vec<Vec<bool>> = (0..m.signature().relations().len())
        .map(|r| m.relation_table(r).to_vec())
        .collect();
    let mut functions: Vec<Vec<usize>> = (0..m.signature().functions().len())
        .map(|f| m.function_table(f).to_vec())
        .collect();
    for sym in &mr.symbols {
        let c = Compiled::with_order(&sym.source, &mr.base, &sym.vars)?;
        match sym.kind {
            MorleyKind::Relation => {
                let table = (0..tuple_count(n, sym.arity))
                    .map(|i| c.eval(m, &index_tuple(n, sym.arity, i)))
                    .collect();
                relations.push(table);
            }
            MorleyKind::Skolem => {
                let table = (0..tuple_count(n, sym.arity))
                    .map(|i| {
                        let rest = index_tuple(n, sym.arity, i);
                        let mut args = Vec::with_capacity(rest.len() + 1);
                        args.push(0);
                        args.extend_from_slice(&rest);
                        (0..n)
                            .find(|&w| {
                                args[0] = w;
                                c.eval(m, &args)
                            })
                            .unwrap_or_else(|| rest.first().copied().unwrap_or(0))
                    })
                    .collect();
                functions.push(table);
            }
        }
    }
    // Morleyization appends symbols in selection order, per kind.
    debug_assert_eq!(relations.len(), mr.signature.relations().len());
    debug_assert_eq!(functions.len(), mr.signature.functions().len());
    Ok(FinStructure::from_tables(
        &mr.signature,
        n,
        relations,
        functions,
    ))
}
