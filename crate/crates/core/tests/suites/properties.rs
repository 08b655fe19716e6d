use std::f64::consts::PI;

use ndarray::Array2;
use proptest::prelude::*;

use cst_arcs::geometry::{
    box_center, flip_frame, radius_from_scatter_angle, scatter_angle_from_radius,
};
use cst_arcs::spectral::{fourier_2d, fourier_x0, inverse_2d, inverse_x0};
use cst_arcs::{project, reconstruct, Frame, ImageGrid, ReconConfig, ScanGeometry, Sinogram};

const N: usize = 16;

fn geom() -> ScanGeometry {
    ScanGeometry::new(40.0, 1.0, 40.0, 1.0)
}

fn image_from(cells: &[f64], delta: f64) -> ImageGrid {
    let mut values = Array2::zeros((N, N));
    // keep one pixel of empty border, like generated phantoms
    for (idx, v) in cells.iter().enumerate() {
        let (j, i) = (1 + idx / (N - 2), 1 + idx % (N - 2));
        values[[j, i]] = *v;
    }
    ImageGrid::new(values, delta, Frame::Physical)
}

fn cells() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![3 => Just(0.0), 1 => 0.0..2.0f64],
        (N - 2) * (N - 2),
    )
}

fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn close(a: &Array2<f64>, b: &Array2<f64>, rel: f64) -> bool {
    let scale = max_abs(a).max(max_abs(b)).max(1e-300);
    a.iter()
        .zip(b.iter())
        .all(|(x, y)| (x - y).abs() <= rel * scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn forward_is_linear(a in cells(), b in cells(), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        let sa = project(&image_from(&a, 2.0), &geom()).unwrap();
        let sb = project(&image_from(&b, 2.0), &geom()).unwrap();
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| s * x + t * y).collect();
        let sm = project(&image_from(&mix, 2.0), &geom()).unwrap();
        let expect = &sa.values * s + &sb.values * t;
        prop_assert!(close(&sm.values, &expect, 1e-12));
    }

    #[test]
    fn reconstruction_is_linear(a in cells(), b in cells(), s in -2.0..2.0f64) {
        let cfg = ReconConfig::default();
        let sa = project(&image_from(&a, 3.0), &geom()).unwrap();
        let sb = project(&image_from(&b, 3.0), &geom()).unwrap();
        let mut sm = sa.clone();
        sm.values = &sa.values * s + &sb.values;
        let ra = reconstruct(&sa, N, 3.0, &cfg).unwrap();
        let rb = reconstruct(&sb, N, 3.0, &cfg).unwrap();
        let rm = reconstruct(&sm, N, 3.0, &cfg).unwrap();
        prop_assert!(close(&rm.values, &(&ra.values * s + &rb.values), 1e-10));
    }

    #[test]
    fn translation_shifts_sensor_rows(a in cells(), shift in 1usize..3) {
        // content in columns 3..N-3 so that both copies keep empty columns
        // between the content and the pixel-centre hull
        let src = image_from(&a, 1.0);
        let mut base = ImageGrid::zeros(N, N, 1.0, Frame::Physical);
        let mut moved = base.clone();
        for ((j, i), v) in src.values.indexed_iter() {
            if (3..N - 3).contains(&i) {
                base.values[[j, i]] = *v;
                moved.values[[j, i + shift]] = *v;
            }
        }
        let s0 = project(&base, &geom()).unwrap();
        let s1 = project(&moved, &geom()).unwrap();
        for k in 0..s0.n_sd() - shift {
            for l in 0..s0.n_r() {
                let (x, y) = (s0.values[[k, l]], s1.values[[k + shift, l]]);
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn mirror_about_box_centre(a in cells(), delta in 0.0..6.0f64) {
        let img = image_from(&a, delta);
        let mut mirrored = img.clone();
        for ((j, i), v) in img.values.indexed_iter() {
            mirrored.values[[j, N - 1 - i]] = *v;
        }
        let (xc, _) = box_center(N, delta);
        let s0 = project(&img, &geom()).unwrap();
        let s1 = project(&mirrored, &geom()).unwrap();
        let scale = max_abs(&s0.values).max(1.0);
        for (k, &x0) in s0.x0_axis.iter().enumerate() {
            let target = 2.0 * xc - x0;
            if let Some(m) = s1.x0_axis.iter().position(|&x| x == target) {
                for l in 0..s0.n_r() {
                    prop_assert!((s0.values[[k, l]] - s1.values[[m, l]]).abs() <= 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn flip_is_an_involution(a in cells(), delta in 0.0..10.0f64) {
        let img = image_from(&a, delta);
        let once = flip_frame(&img);
        prop_assert_eq!(once.frame, Frame::Flipped);
        prop_assert_eq!(&flip_frame(&once), &img);
        for j in 0..N {
            prop_assert!((img.z_coord(j) - (2.0 - once.z_coord(j))).abs() < 1e-12);
        }
    }

    #[test]
    fn radius_angle_round_trip(r in 1.0001..1.0e4f64, omega in (PI / 2.0)..(PI - 1e-6)) {
        let back = radius_from_scatter_angle(scatter_angle_from_radius(r).unwrap()).unwrap();
        prop_assert!((back - r).abs() <= 1e-9 * r);
        let w = scatter_angle_from_radius(radius_from_scatter_angle(omega).unwrap()).unwrap();
        prop_assert!((w - omega).abs() <= 1e-9);
    }

    #[test]
    fn fourier_round_trips(values in prop::collection::vec(-5.0..5.0f64, 37 * 9), pad in 1usize..4) {
        let grid = Array2::from_shape_vec((37, 9), values).unwrap();
        let mut sino = Sinogram::zeros(&ScanGeometry::new(18.0, 1.0, 10.0, 1.0)).unwrap();
        sino.values.assign(&grid);
        let back = inverse_x0(&fourier_x0(&sino, pad).unwrap()).unwrap();
        prop_assert!(close(&back.values, &grid, 1e-10));
        prop_assert!(back.imag_residue < 1e-10);
        let back = inverse_2d(&fourier_2d(&grid, pad).unwrap()).unwrap();
        prop_assert!(close(&back.values, &grid, 1e-10));
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    let img = cst_arcs::generate_phantom(&cst_arcs::PhantomSpec::derenzo(), 32, 4.0).unwrap();
    let g = ScanGeometry::standard(32);
    let a = project(&img, &g).unwrap();
    let b = project(&img, &g).unwrap();
    assert_eq!(a, b);
    let cfg = ReconConfig::default();
    let ra = reconstruct(&a, 32, 4.0, &cfg).unwrap();
    let rb = reconstruct(&b, 32, 4.0, &cfg).unwrap();
    assert_eq!(ra.values, rb.values);
}
