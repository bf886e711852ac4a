//! Union-find with an explanation forest.
//!
//! Besides the usual representative tree, every union records one labelled
//! edge between the two elements that were actually joined. Those edges
//! form a forest; the path between two members of a class is the minimal
//! set of unions that puts them together.

use std::collections::HashMap;
use std::hash::Hash;

pub(crate) struct ExplainUf<K> {
    ids: HashMap<K, u32>,
    keys: Vec<K>,
    parent: Vec<u32>,
    /// Members of the class, valid at representatives only.
    members: Vec<Vec<u32>>,
    /// Explanation forest edge towards the proof root.
    proof: Vec<Option<(u32, u32)>>,
}

impl<K: Hash + Eq + Copy> ExplainUf<K> {
    pub fn new() -> Self {
        Self {
            ids: HashMap::new(),
            keys: Vec::new(),
            parent: Vec::new(),
            members: Vec::new(),
            proof: Vec::new(),
        }
    }

    pub fn node(&mut self, k: K) -> u32 {
        if let Some(&i) = self.ids.get(&k) {
            return i;
        }
        let i = self.keys.len() as u32;
        self.ids.insert(k, i);
        self.keys.push(k);
        self.parent.push(i);
        self.members.push(vec![i]);
        self.proof.push(None);
        i
    }

    pub fn get(&self, k: &K) -> Option<u32> {
        self.ids.get(k).copied()
    }

    pub fn key(&self, i: u32) -> K {
        self.keys[i as usize]
    }

    pub fn find(&self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            i = self.parent[i as usize];
        }
        i
    }

    /// Joins the classes of `a` and `b` with an edge labelled `label`.
    /// Returns the two member lists as they were before the merge, or
    /// `None` when already joined.
    pub fn union(&mut self, a: u32, b: u32, label: u32) -> Option<(Vec<u32>, Vec<u32>)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let before = (
            self.members[ra as usize].clone(),
            self.members[rb as usize].clone(),
        );
        self.reroot(a);
        self.proof[a as usize] = Some((b, label));
        let (big, small) = if before.0.len() >= before.1.len() {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        let moved = std::mem::take(&mut self.members[small as usize]);
        self.members[big as usize].extend(moved);
        Some(before)
    }

    fn reroot(&mut self, a: u32) {
        let mut prev: Option<(u32, u32)> = None;
        let mut cur = a;
        loop {
            let next = self.proof[cur as usize];
            self.proof[cur as usize] = prev;
            match next {
                Some((up, label)) => {
                    prev = Some((cur, label));
                    cur = up;
                }
                None => break,
            }
        }
    }

    /// Edge labels on the forest path between `a` and `b`, from `a` onwards.
    pub fn path(&self, a: u32, b: u32) -> Option<Vec<u32>> {
        if self.find(a) != self.find(b) {
            return None;
        }
        let chain = |mut x: u32| {
            let mut nodes = vec![x];
            let mut labels = Vec::new();
            while let Some((up, label)) = self.proof[x as usize] {
                labels.push(label);
                nodes.push(up);
                x = up;
            }
            (nodes, labels)
        };
        let (na, la) = chain(a);
        let (nb, lb) = chain(b);
        // Both chains end at the same forest root; strip the common tail.
        let (mut i, mut j) = (na.len(), nb.len());
        while i > 0 && j > 0 && na[i - 1] == nb[j - 1] {
            i -= 1;
            j -= 1;
        }
        let mut out: Vec<u32> = la[..i].to_vec();
        out.extend(lb[..j].iter().rev());
        Some(out)
    }

    pub fn classes(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.keys.len() as u32)
            .filter(|&i| self.parent[i as usize] == i)
            .map(|i| self.members[i as usize].as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_path() {
        let mut uf = ExplainUf::new();
        let n: Vec<u32> = (0..5).map(|k| uf.node(k)).collect();
        uf.union(n[0], n[1], 10);
        uf.union(n[2], n[3], 11);
        uf.union(n[1], n[2], 12);
        assert_eq!(uf.path(n[0], n[3]), Some(vec![10, 12, 11]));
        assert_eq!(uf.path(n[3], n[0]), Some(vec![11, 12, 10]));
        assert_eq!(uf.path(n[2], n[2]), Some(vec![]));
        assert_eq!(uf.path(n[0], n[4]), None);
        assert!(uf.union(n[0], n[3], 13).is_none());
    }
}
