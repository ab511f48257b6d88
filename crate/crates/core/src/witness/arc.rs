use super::WitnessError;

/// Branch points of the pillowcase in each copy of `S2 x S1`.
const BRANCH_POINTS: u32 = 4;

/// Counts branch circles after cutting a ball `D2 x I` out of `S2 x S1` and
/// doubling along the boundary sphere.
///
/// Each branch circle `p x S1` with `p` inside the disk is cut into an arc
/// whose two endpoints lie on the boundary sphere; the others are untouched.
/// Doubling glues each endpoint to its mirror in the other copy. The
/// resulting 1-manifold is assembled from labelled endpoints and its closed
/// components are counted.
pub fn arc_gluing_oracle(points_in_disk: u32, copies: u32) -> Result<u32, WitnessError> {
    if copies != 2 || !(points_in_disk == 0 || points_in_disk == 2) {
        return Err(WitnessError::UnsupportedArcGluing {
            points_in_disk,
            copies,
        });
    }
    let k = points_in_disk as usize;
    let untouched = copies * (BRANCH_POINTS - points_in_disk);

    // endpoint (copy, point, end) -> index
    let endpoint = |copy: usize, point: usize, end: usize| (copy * k + point) * 2 + end;
    let mut parent: Vec<usize> = (0..copies as usize * k * 2).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            v = parent[v];
        }
        v
    }
    let join = |a: usize, b: usize, parent: &mut Vec<usize>| {
        let (ra, rb) = (root(parent, a), root(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for copy in 0..copies as usize {
        for point in 0..k {
            // the arc p x (S1 - I)
            join(
                endpoint(copy, point, 0),
                endpoint(copy, point, 1),
                &mut parent,
            );
        }
    }
    for point in 0..k {
        for end in 0..2 {
            join(
                endpoint(0, point, end),
                endpoint(1, point, end),
                &mut parent,
            );
        }
    }
    let glued = (0..parent.len()).filter(|&v| parent[v] == v).count() as u32;
    Ok(untouched + glued)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_counts() {
        assert_eq!(arc_gluing_oracle(2, 2), Ok(6));
        assert_eq!(arc_gluing_oracle(0, 2), Ok(8));
    }

    #[test]
    fn unsupported_parameters() {
        assert!(arc_gluing_oracle(4, 2).is_err());
        assert!(arc_gluing_oracle(2, 3).is_err());
        assert!(arc_gluing_oracle(1, 2).is_err());
    }
}
