//! Plain gnuplot scripts with the data inlined, so a script is self-contained.

use lowlying::DensityCurve;

pub fn density_script(curve: &DensityCurve, csv_name: Option<&str>) -> String {
    let mut s = String::new();
    s.push_str("# gnuplot script: scaled one-level density\n");
    if let Some(name) = csv_name {
        s.push_str(&format!("# data also in {name}\n"));
    }
    s.push_str("set terminal pngcairo size 900,600\n");
    s.push_str(&format!("set output 'density_family{}.png'\n", curve.family.index()));
    s.push_str(&format!(
        "set title 'family {}, X = {:e}, delta mass {} at 0'\n",
        curve.family.index(),
        curve.x,
        curve.delta_mass
    ));
    s.push_str("set xlabel 'tau'\nset ylabel 'density'\nset key bottom right\nset grid\n");
    s.push_str("$density << EOD\n");
    for (i, tau) in curve.tau_grid.iter().enumerate() {
        s.push_str(&format!(
            "{:.16e} {:.16e} {:.16e} {:.16e}\n",
            tau, curve.smooth_values[i], curve.taylor_values[i].re, curve.catalog[i]
        ));
    }
    s.push_str("EOD\n");
    s.push_str(
        "plot $density using 1:2 with lines title 'ratios', \\\n     \
         $density using 1:3 with lines dashtype 2 title '1/L expansion', \\\n     \
         $density using 1:4 with lines dashtype 3 title 'limit'\n",
    );
    s
}
