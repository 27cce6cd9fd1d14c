use periodic_rtree::dataset::{query_boxes, uniform_records};
use periodic_rtree::{Aabb, BoundaryCondition, CuboidCell, ObjectId, RTree};

fn main() {
    let dim = 2;
    let cell = CuboidCell::new(vec![-1.0; dim], vec![9.0; dim]).unwrap();
    let boundary = BoundaryCondition::Periodic(cell.clone());
    let records = uniform_records(101, 400, &cell, 0.1);
    let mut tree = RTree::new(dim, boundary.clone(), 3, 8).unwrap();
    for (i, r) in records.iter().enumerate() {
        eprintln!("insert {i}");
        let aabb = r.to_aabb(&boundary).unwrap();
        tree.insert(ObjectId(r.id), aabb).unwrap();
    }
    eprintln!("built, depth {}", tree.depth());
    eprintln!("validate…");
    let v = tree.validate();
    eprintln!("validated: {} violations", v.len());
    let mut store = periodic_rtree::FlatStore::new(boundary.clone());
    for r in &records {
        store.insert(ObjectId(r.id), r.to_aabb(&boundary).unwrap()).unwrap();
    }
    for (i, (c, r)) in query_boxes(101 ^ 0xabcd, 150, &cell, 0.5).into_iter().enumerate() {
        eprintln!("query {i}");
        let q = Aabb::new(c, r, &boundary).unwrap();
        let a = tree.query_intersects(&q).unwrap();
        eprintln!("  intersects {}", a.len());
        let b = store.scan_intersects(&q);
        assert_eq!(a, b);
        let c2 = tree.query_within(&q).unwrap();
        eprintln!("  within {}", c2.len());
        let d = store.scan_within(&q);
        assert_eq!(c2, d);
    }
    eprintln!("done");
}
