/// Union-find with union by size and path compression.
///
/// On equal sizes the smaller index becomes the root, so merge results do
/// not depend on argument order.
#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn is_root(&self, x: usize) -> bool {
        self.parent[x] == x
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Member count of the set rooted at `root`.
    pub fn set_size(&self, root: usize) -> usize {
        debug_assert!(self.is_root(root));
        self.size[root]
    }

    /// Merges the sets of `a` and `b`; returns the surviving root.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        let (root, child) = match self.size[ra].cmp(&self.size[rb]) {
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Equal => (ra.min(rb), ra.max(rb)),
        };
        self.parent[child] = root;
        self.size[root] += self.size[child];
        root
    }

    /// Groups of members, each ascending, ordered by smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut slot = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(x);
        }
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_by_size_and_find() {
        let mut ds = DisjointSet::new(6);
        assert_eq!(ds.union(3, 1), 1);
        assert_eq!(ds.union(1, 5), 1);
        assert_eq!(ds.union(0, 5), 1);
        assert_eq!(ds.set_size(1), 4);
        for x in [0, 1, 3, 5] {
            assert_eq!(ds.find(x), 1);
        }
        assert!(ds.is_root(2) && ds.is_root(4));
        assert_eq!(ds.groups(), vec![vec![0, 1, 3, 5], vec![2], vec![4]]);
    }

    #[test]
    fn path_compression_flattens() {
        let mut ds = DisjointSet::new(4);
        ds.union(0, 1);
        ds.union(2, 3);
        ds.union(0, 2);
        assert_eq!(ds.find(3), 0);
        assert_eq!(ds.parent[3], 0);
    }
}
