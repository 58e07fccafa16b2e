use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{parse, Formula, MorleyizationResult, Signature};
use crate::structure::{
    enumerate_structures, expand_morley, EnumerationLimits, FinStructure, StructureFile,
};

/// The models of a finite theory up to a size bound, one per isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedClass {
    pub signature: Signature,
    pub axioms: Vec<Formula>,
    pub size: usize,
    pub models: Vec<FinStructure>,
}

#[derive(Serialize, Deserialize)]
struct ClassFile {
    signature: serde_json::Value,
    axioms: Vec<String>,
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    models: Option<Vec<StructureFile>>,
}

/// Enumerate the models of `axioms` with at most `n` elements.
pub fn build_class(sig: &Signature, axioms: &[Formula], n: usize) -> Result<BoundedClass> {
    BoundedClass::build(sig, axioms, n, EnumerationLimits::default())
}

impl BoundedClass {
    pub fn build(
        sig: &Signature,
        axioms: &[Formula],
        n: usize,
        limits: EnumerationLimits,
    ) -> Result<Self> {
        for a in axioms {
            a.validate(sig)?;
        }
        Ok(BoundedClass {
            signature: sig.clone(),
            axioms: axioms.to_vec(),
            size: n,
            models: enumerate_structures(sig, n, axioms, limits)?,
        })
    }

    /// Parse axioms in concrete syntax and build.
    pub fn from_text(sig: &Signature, axioms: &[&str], n: usize) -> Result<Self> {
        let axioms = axioms
            .iter()
            .map(|a| parse(a, sig))
            .collect::<Result<Vec<_>>>()?;
        build_class(sig, &axioms, n)
    }

    /// The class of Morleyized expansions of `self`'s models. Each model has a
    /// unique expansion satisfying the definitional axioms, so expanding the
    /// models is the same as enumerating the expanded theory.
    pub fn morleyized(&self, mr: &MorleyizationResult) -> Result<Self> {
        if mr.base != self.signature {
            return Err(Error::SignatureMismatch(
                "Morleyization over a different signature".into(),
            ));
        }
        let models = crate::par::map(&self.models, |m| expand_morley(m, mr))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundedClass {
            signature: mr.signature.clone(),
            axioms: self.axioms.iter().chain(&mr.axioms).cloned().collect(),
            size: self.size,
            models,
        })
    }

    /// Sub-class of models satisfying every sentence in `extra`.
    pub fn restrict(&self, extra: &[Formula]) -> Result<Self> {
        let compiled = extra
            .iter()
            .map(|f| crate::structure::compile(f, &self.signature))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundedClass {
            signature: self.signature.clone(),
            axioms: self.axioms.iter().chain(extra).cloned().collect(),
            size: self.size,
            models: self
                .models
                .iter()
                .filter(|m| compiled.iter().all(|c| c.eval(m, &[])))
                .cloned()
                .collect(),
        })
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn to_json(&self) -> String {
        let file = ClassFile {
            signature: serde_json::to_value(&self.signature).expect("signature serializes"),
            axioms: self.axioms.iter().map(|a| a.to_string()).collect(),
            size: self.size,
            models: Some(self.models.iter().map(FinStructure::to_file).collect()),
        };
        serde_json::to_string(&file).expect("class serializes")
    }

    /// Read a class file. When `models` is absent the class is enumerated.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ClassFile = serde_json::from_str(text)?;
        let sig = Signature::from_json(&file.signature.to_string())?;
        let axioms = file
            .axioms
            .iter()
            .map(|a| parse(a, &sig))
            .collect::<Result<Vec<_>>>()?;
        match file.models {
            None => build_class(&sig, &axioms, file.size),
            Some(models) => Ok(BoundedClass {
                models: models
                    .iter()
                    .map(|m| FinStructure::from_file(m, Some(&sig)))
                    .collect::<Result<Vec<_>>>()?,
                signature: sig,
                axioms,
                size: file.size,
            }),
        }
    }
}

/// Named classes used by the command line and the acceptance suite.
pub mod builtin {
    use super::*;

    pub const SIMPLE_GRAPH: [&str; 2] = [
        "(forall x (not (E x x)))",
        "(forall x (forall y (-> (E x y) (E y x))))",
    ];

    fn graphs_with(extra: &[&str], n: usize) -> Result<BoundedClass> {
        let axioms: Vec<&str> = SIMPLE_GRAPH
            .iter()
            .copied()
            .chain(extra.iter().copied())
            .collect();
        BoundedClass::from_text(&Signature::graph(), &axioms, n)
    }

    pub fn graphs(n: usize) -> Result<BoundedClass> {
        graphs_with(&[], n)
    }

    pub fn cliques(n: usize) -> Result<BoundedClass> {
        graphs_with(&["(forall x (forall y (or (= x y) (E x y))))"], n)
    }

    pub fn non_edge(n: usize) -> Result<BoundedClass> {
        graphs_with(
            &["(exists x (exists y (and (not (= x y)) (not (E x y)))))"],
            n,
        )
    }

    pub fn triangle_free(n: usize) -> Result<BoundedClass> {
        graphs_with(
            &["(not (exists x (exists y (exists z (and (E x y) (and (E y z) (E x z)))))))"],
            n,
        )
    }

    pub fn equality(n: usize) -> Result<BoundedClass> {
        BoundedClass::from_text(&Signature::empty(), &[], n)
    }

    pub fn linear_orders(n: usize) -> Result<BoundedClass> {
        let sig = Signature::new([("lt", 2)], Vec::<(String, usize)>::new(), None)?;
        BoundedClass::from_text(
            &sig,
            &[
                "(forall x (not (lt x x)))",
                "(forall x (forall y (forall z (-> (and (lt x y) (lt y z)) (lt x z)))))",
                "(forall x (forall y (or (= x y) (or (lt x y) (lt y x)))))",
            ],
            n,
        )
    }

    /// Look a class up by name: graphs, cliques, non-edge, triangle-free,
    /// equality, linear-orders.
    pub fn by_name(name: &str, n: usize) -> Result<BoundedClass> {
        match name {
            "graphs" => graphs(n),
            "cliques" => cliques(n),
            "non-edge" => non_edge(n),
            "triangle-free" => triangle_free(n),
            "equality" => equality(n),
            "linear-orders" => linear_orders(n),
            _ => Err(Error::Unsupported(format!("unknown class `{name}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_sizes() {
        assert_eq!(builtin::graphs(3).unwrap().len(), 7);
        assert_eq!(builtin::equality(2).unwrap().len(), 2);
        let bad =
            BoundedClass::from_text(&Signature::graph(), &["(exists x (not (= x x)))"], 3).unwrap();
        assert!(bad.is_empty());
        assert_eq!(
            builtin::linear_orders(3)
                .unwrap()
                .models
                .iter()
                .filter(|m| m.size() == 3)
                .count(),
            1
        );
    }

    #[test]
    fn json_roundtrip() {
        let c = builtin::cliques(3).unwrap();
        let back = BoundedClass::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
