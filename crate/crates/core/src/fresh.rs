use std::collections::BTreeSet;

/// Deterministic supply of names avoiding a growing set.
///
/// `name("k")` yields `k` if unused, otherwise `k1`, `k2`, ... Every name
/// handed out is recorded, so later requests never repeat it.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_avoid(used: BTreeSet<String>) -> Self {
        Fresh { used }
    }

    pub fn avoid(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn avoid_all<I, S>(&mut self, names: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for n in names {
            self.avoid(n.as_ref());
        }
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    pub fn name(&mut self, base: &str) -> String {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "v" } else { stem };
        if !self.used.contains(stem) {
            self.used.insert(stem.to_string());
            return stem.to_string();
        }
        let mut i = 1usize;
        loop {
            let cand = format!("{stem}{i}");
            if !self.used.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_up_from_the_stem() {
        let mut f = Fresh::new();
        f.avoid("k");
        assert_eq!(f.name("k"), "k1");
        assert_eq!(f.name("k3"), "k2");
        assert_eq!(f.name("g"), "g");
    }
}
