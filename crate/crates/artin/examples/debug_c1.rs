use std::collections::HashMap;
use artin::dihedral::DihedralGroup;
use artin::graph::DefiningGraph;
use artin::oracle::Oracle;
use artin::word::{Letter, Word};

fn reduced_words_up_to(len: usize) -> Vec<Word> {
    let mut all = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    let letters = [Letter::pos(0), Letter::neg(0), Letter::pos(1), Letter::neg(1)];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.letters().last().is_some_and(|&last| last.cancels(l)) { continue; }
                let mut v = w.clone();
                v.0.push(l);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

struct P(Vec<usize>);
impl P {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x { let r = self.find(self.0[x]); self.0[x] = r; }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) { let (x, y) = (self.find(a), self.find(b)); if x != y { self.0[x] = y; } }
}

fn main() {
    let m = 3u32;
    let graph = DefiningGraph::new(vec!["s", "t"], vec![("s", "t", m)]).unwrap();
    let oracle = Oracle::new(graph.clone()).unwrap();
    let group = DihedralGroup::new(0, 1, m).unwrap();
    let words = reduced_words_up_to(8);
    let index: HashMap<&Word, usize> = words.iter().zip(0..).collect();
    let mut part = P((0..words.len()).collect());
    for (i, w) in words.iter().enumerate() {
        for succ in oracle.rewrite_successors(w) {
            part.union(i, index[&succ]);
        }
    }
    // find shortest pair: same NF, different components
    let mut by_nf: HashMap<_, Vec<usize>> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        by_nf.entry(group.normal_form(w).unwrap()).or_default().push(i);
    }
    let mut best: Option<(usize, usize)> = None;
    for (_, ids) in by_nf {
        let r0 = part.find(ids[0]);
        for &i in &ids[1..] {
            if part.find(i) != r0 {
                let cand = (ids[0], i);
                let cost = words[cand.0].len() + words[cand.1].len();
                if best.map(|(a, b)| words[a].len() + words[b].len() > cost).unwrap_or(true) {
                    best = Some(cand);
                }
            }
        }
    }
    if let Some((a, b)) = best {
        println!("SPLIT: {:?}  vs  {:?}", words[a].display(&graph), words[b].display(&graph));
        println!("NF a: {:?}", group.normal_form(&words[a]).unwrap());
        println!("NF b: {:?}", group.normal_form(&words[b]).unwrap());
        println!("oracle equal: {:?}", oracle.are_equal(&words[a], &words[b]));
        println!("succ a: {:?}", oracle.rewrite_successors(&words[a]).iter().map(|w| w.display(&graph)).collect::<Vec<_>>());
        println!("succ b: {:?}", oracle.rewrite_successors(&words[b]).iter().map(|w| w.display(&graph)).collect::<Vec<_>>());
    } else {
        println!("no split found");
    }
}
