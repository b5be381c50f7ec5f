// SPDX-License-Identifier: Apache-2.0
//
// csisr - super-resolution channel estimation for MIMO-OFDM resource blocks
// Copyright (C) 2026 The csisr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "csisr/commands.hpp"

#include "csisr/datastore.hpp"
#include "csisr/parallel.hpp"
#include "csisr/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace csisr::cli
{

std::string pilots_label(const PilotPattern &pattern, const GridDims &dims)
{
    return std::to_string(pattern.freq_count(dims.n_sc)) + "x" + std::to_string(pattern.time_count(dims.n_s));
}

std::string scenario_label(const ChannelModelConfig &channel)
{
    return channel.line_of_sight() ? "LOS" : "NLOS";
}

namespace
{

void write_text(const std::filesystem::path &path, const std::string &body)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    out << body;
    out.close();
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<ChannelGrid> load_frames(const std::filesystem::path &path, const ResolvedConfig &cfg, const char *what)
{
    if (!std::filesystem::exists(path))
        throw std::runtime_error(std::string(what) + " dataset '" + path.string() + "' not found; run generate first");
    auto frames = store::read_dataset(path);
    if (frames.empty())
        throw std::runtime_error(std::string(what) + " dataset '" + path.string() + "' holds no frames");
    if (!(frames.front().dims() == cfg.channel.dims()))
        throw std::runtime_error(std::string(what) + " dataset '" + path.string() + "' has dims " +
                                 to_string(frames.front().dims()) + ", config expects " +
                                 to_string(cfg.channel.dims()));
    return frames;
}

std::string history_csv(const sr::LossHistory &history)
{
    std::string s = "epoch,train_loss,val_loss,best_val_loss\n";
    for (const auto &r : history)
        s += std::to_string(r.epoch) + "," + text::format_double(r.train_loss) + "," +
             text::format_double(r.val_loss) + "," + text::format_double(r.best_val_loss) + "\n";
    return s;
}

std::pair<long, long> pilot_extent(const std::string &label)
{
    const auto x = label.find('x');
    try
    {
        if (x != std::string::npos)
            return {std::stol(label.substr(0, x)), std::stol(label.substr(x + 1))};
    }
    catch (const std::exception &)
    {
    }
    return {-1, -1};
}

} // namespace

GenerateSummary cmd_generate(const ExperimentConfig &config, std::ostream &log)
{
    const auto cfg = config.resolve();
    if (cfg.train_frames == 0 || cfg.val_frames == 0)
        throw ConfigError("dataset.train_frames and dataset.val_frames must be positive");
    GenerateSummary s{cfg.train_dataset, cfg.val_dataset, cfg.train_frames, cfg.val_frames, cfg.channel.dims()};
    store::write_dataset(generate_frames(cfg.channel, cfg.train_frames, derive_seed(cfg.seed, kTrainFramesStream)),
                         s.train_path);
    store::write_dataset(generate_frames(cfg.channel, cfg.val_frames, derive_seed(cfg.seed, kValFramesStream)),
                         s.val_path);
    log << "generated " << s.train_frames << " training frames -> " << s.train_path.string() << "\n"
        << "generated " << s.val_frames << " validation frames -> " << s.val_path.string() << "\n"
        << "dims " << to_string(s.dims) << ", scenario " << scenario_label(cfg.channel) << ", seed " << cfg.seed
        << "\n";
    return s;
}

TrainSummary cmd_train(const ExperimentConfig &config, std::ostream &log)
{
    const auto cfg = config.resolve();
    if (!cfg.method.network)
        throw ConfigError("train: interp must be srcnn or edsr, got '" + cfg.method.name() + "'");
    const auto arch = *cfg.method.network;

    const auto frames = load_frames(cfg.train_dataset, cfg, "training");
    const auto [train_frames, val_frames] = [&] {
        try
        {
            return sr::split_frames(frames, cfg.train.val_split);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
    }();

    std::optional<ReceiveCorrelation> r_h;
    if (cfg.recovery == RecoveryMethod::Mmse)
        r_h = estimate_receive_correlation(train_frames);
    const RecoverySetup setup{cfg.pilots, cfg.snr_db, cfg.recovery, r_h ? &*r_h : nullptr};

    const auto spec = arch == sr::Architecture::Srcnn ? cfg.srcnn.serialize() : cfg.edsr.serialize();
    auto model = sr::build_model(arch, spec, derive_seed(cfg.train.seed, kModelInitStream));
    log << "training " << sr::to_string(arch) << " (" << model->parameter_count() << " parameters) on "
        << train_frames.size() << " frames, validating on " << val_frames.size() << ", recovery "
        << to_string(cfg.recovery) << ", snr " << text::format_double(cfg.snr_db) << " dB\n";

    auto result = sr::train(*model, train_frames, val_frames, setup, cfg.train);

    TrainSummary s;
    s.checkpoint = cfg.checkpoint(arch, cfg.recovery);
    s.history_path = s.checkpoint.parent_path() / (s.checkpoint.stem().string() + "_history.csv");
    s.history = std::move(result.history);
    store::write_checkpoint(result.checkpoint, s.checkpoint);
    write_text(s.history_path, history_csv(s.history));
    for (const auto &r : s.history)
        log << "epoch " << r.epoch << "  train " << text::format_double(r.train_loss) << "  val "
            << text::format_double(r.val_loss) << "\n";
    log << "checkpoint -> " << s.checkpoint.string() << "\nhistory -> " << s.history_path.string() << "\n";
    return s;
}

EvaluateSummary cmd_evaluate(const ExperimentConfig &config, std::ostream &log)
{
    const auto cfg = config.resolve();
    const auto truth = load_frames(cfg.val_dataset, cfg, "validation");
    const double peak = cfg.peak.value_or(sr::NormalizationStats::from_frames<float>(truth).scale);

    std::optional<ReceiveCorrelation> r_h;
    if (std::count(cfg.eval_recoveries.begin(), cfg.eval_recoveries.end(), RecoveryMethod::Mmse))
        r_h = estimate_receive_correlation(load_frames(cfg.train_dataset, cfg, "training (for R_H)"));

    const auto pilots = pilots_label(cfg.pilots, cfg.channel.dims());
    const auto scenario = scenario_label(cfg.channel);
    EvaluateSummary s;
    s.report = cfg.report;
    for (const auto recovery : cfg.eval_recoveries)
    {
        const RecoverySetup setup{cfg.pilots, cfg.snr_db, recovery, r_h ? &*r_h : nullptr};
        const auto recovered = sr::recover_frames(truth, setup, derive_seed(cfg.seed, kEvalNoiseStream));
        for (const auto &method : cfg.eval_methods)
        {
            std::vector<GridEstimate> estimates(truth.size());
            if (method.network)
            {
                const auto path = cfg.checkpoint(*method.network, recovery);
                if (!std::filesystem::exists(path))
                    throw std::runtime_error("checkpoint '" + path.string() + "' for " + method.name() + "/" +
                                             std::string(to_string(recovery)) + " not found; run train first");
                const auto checkpoint = store::read_checkpoint(path);
                if (checkpoint.architecture != *method.network)
                    throw std::runtime_error("checkpoint '" + path.string() + "' holds an " +
                                             std::string(sr::to_string(checkpoint.architecture)) + " model");
                estimates = sr::SrEstimator(checkpoint).estimate(recovered);
            }
            else
            {
                parallel_for(truth.size(), [&](std::size_t j) { estimates[j] = interpolate(recovered[j], *method.interp); });
            }
            metrics::MetricReport row;
            row.method = method.name();
            row.recovery = std::string(to_string(recovery));
            row.pilots = pilots;
            row.scenario = scenario;
            row.snr_db = cfg.snr_db;
            row.psnr_db = metrics::psnr_db<double, float>(estimates, truth, peak);
            row.nmse_db = metrics::nmse_db<double, float>(estimates, truth, cfg.nmse);
            row.frames = truth.size();
            s.rows.push_back(row);
        }
    }

    std::string body;
    body += "# csisr evaluate\n";
    body += "# psnr_db = 10*log10(peak^2 / mse); mse over the real channel image (real and imaginary part of "
            "every antenna pair, every grid point, all frames); peak = " +
            text::format_double(peak) + (cfg.peak ? " (metrics.peak)" : " (max |re|,|im| of the evaluation set)") +
            "\n";
    body += "# nmse_db = 10*log10(" +
            std::string(cfg.nmse == metrics::NmseAveraging::PerFrame
                            ? "mean over frames of ||H - Hhat||_F^2 / ||H||_F^2"
                            : "sum over frames of ||H - Hhat||_F^2 / sum over frames of ||H||_F^2") +
            ")\n";
    body += config.echo("# ");
    body += metrics::csv_header() + "\n";
    for (const auto &r : s.rows)
        body += metrics::to_csv_row(r) + "\n";
    write_text(s.report, body);

    for (const auto &r : s.rows)
        log << std::left << std::setw(16) << r.method << std::setw(6) << r.recovery << "PSNR "
            << metrics::format_metric(r.psnr_db) << " dB  NMSE " << metrics::format_metric(r.nmse_db) << " dB\n";
    log << "report -> " << s.report.string() << "\n";
    return s;
}

std::vector<metrics::MetricReport> read_report_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read report '" + path.string() + "'");
    std::vector<metrics::MetricReport> rows;
    bool header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        if (!header)
        {
            if (t != metrics::csv_header())
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected header '" +
                                         metrics::csv_header() + "'");
            header = true;
            continue;
        }
        try
        {
            rows.push_back(metrics::parse_csv_row(t));
        }
        catch (const std::invalid_argument &e)
        {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header)
        throw std::runtime_error(path.string() + ": missing header line");
    return rows;
}

void sort_reports(std::vector<metrics::MetricReport> &rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
        if (a.scenario != b.scenario)
            return a.scenario < b.scenario;
        if (a.pilots != b.pilots)
        {
            const auto pa = pilot_extent(a.pilots);
            const auto pb = pilot_extent(b.pilots);
            return pa != pb ? pa < pb : a.pilots < b.pilots;
        }
        return a.method < b.method;
    });
}

ReportSummary cmd_report(const std::vector<std::filesystem::path> &csvs, const std::filesystem::path &out_dir,
                         std::ostream &log)
{
    if (csvs.empty())
        throw ConfigError("report: no input CSV files given");
    ReportSummary s;
    for (const auto &p : csvs)
    {
        auto rows = read_report_csv(p);
        s.rows.insert(s.rows.end(), rows.begin(), rows.end());
    }
    sort_reports(s.rows);

    std::string table = metrics::csv_header() + "\n";
    for (const auto &r : s.rows)
        table += metrics::to_csv_row(r) + "\n";
    s.table = out_dir / "merged.csv";
    write_text(s.table, table);

    // Groups keep first-appearance order of the sorted table.
    std::vector<std::string> keys;
    std::map<std::string, std::string> bodies;
    for (const auto &r : s.rows)
    {
        const auto key = "series_" + r.scenario + "_" + text::format_double(r.snr_db) + "dB_" + r.recovery;
        if (!bodies.count(key))
        {
            keys.push_back(key);
            bodies[key] = "method,pilots,nmse_db,psnr_db\n";
        }
        bodies[key] += r.method + "," + r.pilots + "," + metrics::format_metric(r.nmse_db) + "," +
                       metrics::format_metric(r.psnr_db) + "\n";
    }
    for (const auto &k : keys)
    {
        auto name = k;
        std::replace(name.begin(), name.end(), '.', 'p');
        s.series.push_back(out_dir / (name + ".csv"));
        write_text(s.series.back(), bodies[k]);
    }

    log << std::left << std::setw(8) << "scenario" << std::setw(10) << "pilots" << std::setw(16) << "method"
        << std::setw(9) << "recovery" << std::setw(8) << "snr_db" << std::setw(14) << "psnr_db"
        << "nmse_db\n";
    for (const auto &r : s.rows)
        log << std::left << std::setw(8) << r.scenario << std::setw(10) << r.pilots << std::setw(16) << r.method
            << std::setw(9) << r.recovery << std::setw(8) << metrics::format_metric(r.snr_db) << std::setw(14)
            << metrics::format_metric(r.psnr_db) << metrics::format_metric(r.nmse_db) << "\n";
    log << "merged table -> " << s.table.string() << "\n";
    for (const auto &p : s.series)
        log << "series -> " << p.string() << "\n";
    return s;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"CSI super-resolution laboratory"};
    app.require_subcommand(1);

    struct Common
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::string out;
        std::vector<std::string> overrides;
    };
    Common common;
    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", common.config, "config file (key = value lines)");
        cmd->add_option("--seed", common.seed, "experiment seed");
        cmd->add_option("--out", common.out, "output directory");
        cmd->add_option("--override", common.overrides, "key=value, repeatable")->take_all();
    };
    auto *generate = app.add_subcommand("generate", "generate training and validation datasets");
    auto *train = app.add_subcommand("train", "train an SR network");
    auto *evaluate = app.add_subcommand("evaluate", "evaluate methods on the validation dataset");
    auto *report = app.add_subcommand("report", "merge evaluation CSVs into tables and series");
    for (auto *cmd : {generate, train, evaluate})
        add_common(cmd);
    std::vector<std::string> csvs;
    std::string report_out = ".";
    report->add_option("csv", csvs, "evaluation CSV files");
    report->add_option("--out", report_out, "output directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try
    {
        if (report->parsed())
        {
            std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
            cmd_report(paths, report_out, out);
            return 0;
        }
        auto cfg = common.config.empty() ? ExperimentConfig() : ExperimentConfig::from_file(common.config);
        if (common.seed)
            cfg.set("seed", std::to_string(*common.seed));
        if (!common.out.empty())
            cfg.set("output", common.out);
        for (const auto &o : common.overrides)
            cfg.apply_override(o);
        if (generate->parsed())
            cmd_generate(cfg, out);
        else if (train->parsed())
            cmd_train(cfg, out);
        else
            cmd_evaluate(cfg, out);
        return 0;
    }
    catch (const ConfigError &e)
    {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace csisr::cli
