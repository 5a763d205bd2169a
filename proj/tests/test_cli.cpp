#include <mazer/cli.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace mazer;
using namespace mazer::cli;

namespace {

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

std::string run_to_string(const Settings& settings, int expected_status = exit_ok)
{
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run(make_config(settings), out, err), expected_status) << err.str();
    return out.str();
}

} // namespace

TEST(ParseSettings, KeyValueWithComments)
{
    std::istringstream in("# comment\ncommand = sweep-length\n k-over-kappa= 0.05 # inline\n\n"
                          "delta_over_g =-0.01\n");
    const auto s = parse_settings(in);
    EXPECT_EQ(s.at("command"), "sweep-length");
    EXPECT_EQ(s.at("k_over_kappa"), "0.05");
    EXPECT_EQ(s.at("delta_over_g"), "-0.01");
    std::istringstream bad("just words\n");
    EXPECT_THROW(parse_settings(bad), ConfigError);
}

TEST(ParseGrid, RangeAndList)
{
    const auto g = parse_grid("0:10:11");
    ASSERT_EQ(g.values.size(), 11u);
    EXPECT_EQ(g.values[3], 3.0);
    const auto h = parse_grid("0.1, 0.2,0.5");
    ASSERT_EQ(h.values.size(), 3u);
    EXPECT_EQ(h.values[2], 0.5);
    EXPECT_THROW(parse_grid("0:1:1"), ConfigError);
    EXPECT_THROW(parse_grid("0:1"), ConfigError);
    EXPECT_THROW(parse_grid("1:0:5"), ConfigError);
    EXPECT_THROW(parse_grid("0.2,0.1"), ConfigError);
    EXPECT_THROW(parse_grid("a,b"), ConfigError);
}

TEST(MakeConfig, ValidatesSettings)
{
    EXPECT_THROW(make_config({{"command", "bogus"}}), ConfigError);
    EXPECT_THROW(make_config({{"k_over_kappa", "-1"}}), ConfigError);
    EXPECT_THROW(make_config({{"k_over_kappa", "abc"}}), ConfigError);
    EXPECT_THROW(make_config({{"n", "-2"}}), ConfigError);
    EXPECT_THROW(make_config({{"n", "1.5"}}), ConfigError);
    EXPECT_THROW(make_config({{"mode", "gaussian"}}), ConfigError);
    EXPECT_THROW(make_config({{"mode", "custom:/nonexistent.txt"}}), ConfigError);
    EXPECT_THROW(make_config({{"segments", "0"}}), ConfigError);
    EXPECT_THROW(make_config({{"colour", "blue"}}), ConfigError);
    EXPECT_THROW(make_config({{"command", "sweep-k"}, {"grid", "0:0.1:5"}}), ConfigError);

    const auto c = make_config({{"command", "transmission-scan"}, {"kappa_l", "1000"},
                                {"mode", "sech2"}, {"g_hz", "1e5"}});
    EXPECT_EQ(c.command, Command::TransmissionScan);
    EXPECT_EQ(c.axis, SweepAxis::DeltaOverG);
    EXPECT_EQ(c.observable, Observable::T_total);
    EXPECT_EQ(c.params.kappa_L(), 1000.0);
    EXPECT_EQ(c.params.mode(), ModeKind::SechSquared);
    EXPECT_EQ(*c.g_hz, 1e5);
}

TEST(Run, SweepSchema)
{
    const auto text = run_to_string({{"command", "sweep-length"}, {"k_over_kappa", "100"},
                                     {"grid", "0:10:5"}});
    const auto rows = lines(text);
    std::size_t header = 0;
    while (header < rows.size() && rows[header].rfind("# ", 0) == 0) {
        ++header;
    }
    ASSERT_EQ(rows.size(), header + 6);
    EXPECT_EQ(rows[header], "kappa_L,R_a,T_a,R_b,T_b,P_em,T_total");
    EXPECT_NE(text.find("# mazer-sim version: "), std::string::npos);
    EXPECT_NE(text.find("# k_over_kappa: 100\n"), std::string::npos);
    EXPECT_NE(text.find("# grid: 0:10:5\n"), std::string::npos);
    EXPECT_EQ(rows[header + 1].rfind("0,", 0), 0u);
    // 17 significant digits
    EXPECT_NE(rows[header + 2].find("2.5,"), std::string::npos);
}

TEST(Run, DeterministicApartFromTimestamp)
{
    const Settings s = {{"command", "sweep-detuning"}, {"k_over_kappa", "0.05"},
                        {"kappa_l", "20"}, {"grid", "-0.01:0.01:40"}, {"mode", "sin2"},
                        {"segments", "50"}};
    EXPECT_EQ(strip_timestamp(run_to_string(s)), strip_timestamp(run_to_string(s)));
}

TEST(Run, SolverErrorsGiveStatusTwo)
{
    // (0.5)^2 == 0.25 puts the b channel exactly at threshold
    const auto text = run_to_string({{"command", "sweep-detuning"}, {"k_over_kappa", "0.5"},
                                     {"grid", "0.2,0.25,0.3"}},
                                    exit_solver);
    EXPECT_NE(text.find("0.25,nan,nan,nan,nan,nan,nan"), std::string::npos);
}

TEST(Run, JcCompareColumns)
{
    const auto text = run_to_string({{"command", "jc-compare"}, {"k_over_kappa", "100"},
                                     {"grid", "0:600:7"}});
    EXPECT_NE(text.find("kappa_L,P_em,P_jc,abs_diff\n"), std::string::npos);
    for (const auto& line : lines(text)) {
        if (line.empty() || line[0] == '#' || line[0] == 'k') {
            continue;
        }
        const double diff = std::stod(line.substr(line.rfind(',') + 1));
        EXPECT_LT(diff, 1e-3);
    }
}

TEST(Run, FindPeaksAndTransmissionScan)
{
    const auto peaks = run_to_string({{"command", "find-peaks"}, {"k_over_kappa", "0.01"},
                                      {"grid", "1:10:901"}});
    EXPECT_NE(peaks.find("position,amplitude,fwhm,prominence,partial\n"), std::string::npos);
    EXPECT_EQ(lines(peaks).back().substr(0, 3), "9.4");

    const auto scan = run_to_string({{"command", "transmission-scan"}, {"k_over_kappa", "0.05"},
                                     {"kappa_l", "1000"}, {"grid", "-0.02:0.02:2001"},
                                     {"g_hz", "1e5"}});
    EXPECT_NE(scan.find("# resonances: "), std::string::npos);
    EXPECT_NE(scan.find("fwhm_hz="), std::string::npos);
    EXPECT_NE(scan.find("delta_over_g,R_a,T_a,R_b,T_b,P_em,T_total\n"), std::string::npos);
}

TEST(Run, BeamFilterColumns)
{
    const auto text = run_to_string({{"command", "beam-filter"}, {"kappa_l", "100"},
                                     {"k0_over_kappa", "0.05"}, {"grid", "0.0025:0.2:50"}});
    EXPECT_NE(text.find("k_over_kappa,P_i,P_f\n"), std::string::npos);
    EXPECT_NE(text.find("# k0_over_kappa: 0.050000000000000003\n"), std::string::npos);
}

TEST(Run, CustomModeRelativeToConfigDir)
{
    const auto c = make_config({{"mode", "custom:configs/modes/ramp.txt"}},
                               MAZER_SOURCE_DIR);
    ASSERT_TRUE(c.solver.custom_mode.has_value());
    EXPECT_EQ(c.params.mode(), ModeKind::Custom);
}

TEST(StripTimestamp, DropsOnlyTimestamp)
{
    EXPECT_EQ(strip_timestamp("# a: 1\n# timestamp: now\nx\n"), "# a: 1\nx\n");
}

TEST(ParseSettings, KeysAreCaseAndDashInsensitive)
{
    std::istringstream in("Kappa-L = 3\nk_over_kappa = 0.2\n");
    const auto cfg = mazer::cli::make_config(mazer::cli::parse_settings(in), {});
    EXPECT_DOUBLE_EQ(cfg.params.kappa_L(), 3.0);
}

TEST(Run, TemperaturesNeedBothConstants)
{
    std::istringstream in("command = sweep-length\nk_over_kappa = 0.01\n"
                          "delta_over_g = -0.0003\ngrid = 1,2\ng_hz = 100000\n"
                          "mass_kg = 1.4e-25\n");
    const auto cfg = make_config(parse_settings(in), {});
    std::ostringstream out, err;
    ASSERT_EQ(run(cfg, out, err), exit_ok);
    const double kb = std::sqrt(0.01 * 0.01 + 0.0003);
    const std::string expected =
        "# emitted_temperature_K: " +
        format_number(effective_temperature(kb, 1e5, 1.4e-25)) + "\n";
    EXPECT_NE(out.str().find(expected), std::string::npos);
    EXPECT_NE(out.str().find("# incident_temperature_K: "), std::string::npos);

    std::istringstream only_g("command = sweep-length\ngrid = 1,2\ng_hz = 100000\n");
    std::ostringstream out2;
    ASSERT_EQ(run(make_config(parse_settings(only_g), {}), out2, err), exit_ok);
    EXPECT_EQ(out2.str().find("temperature"), std::string::npos);
}
