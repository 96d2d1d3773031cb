// Command-line front end: generate / label / simplify / evaluate /
// inspect / subsample / convert point clouds against a classed scene
// model.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "m2c/cloud_io.hpp"
#include "m2c/errors.hpp"
#include "m2c/labeler.hpp"
#include "m2c/metrics.hpp"
#include "m2c/scenegen.hpp"
#include "m2c/simplify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

m2c::TaxonomyId parse_taxonomy(const std::string& name) {
    if (name == "gold") return m2c::TaxonomyId::Gold;
    if (name == "silver") return m2c::TaxonomyId::Silver;
    throw m2c::ParseError("taxonomy must be gold or silver, got '" + name + "'");
}

const char* taxonomy_name(m2c::TaxonomyId id) {
    return id == m2c::TaxonomyId::Gold ? "gold" : "silver";
}

// "Door=10cm", "Exit_sign=0.05", "Wall=4cm" -> (class id, meters)
std::pair<std::uint8_t, double> parse_tau_override(const std::string& text,
                                                   const m2c::Taxonomy& tax) {
    std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw m2c::ParseError("tau override '" + text + "' is not Class=value");
    std::string name = text.substr(0, eq);
    std::replace(name.begin(), name.end(), '_', ' ');
    auto cls = tax.find(name);
    if (!cls) throw m2c::ClassUnknown("tau override class '" + name + "'");

    std::string value = text.substr(eq + 1);
    double scale = 1.0;
    if (value.size() > 2 && value.compare(value.size() - 2, 2, "cm") == 0) {
        scale = 0.01;
        value.resize(value.size() - 2);
    } else if (!value.empty() && value.back() == 'm') {
        value.pop_back();
    }
    double meters = 0.0;
    try {
        std::size_t used = 0;
        meters = std::stod(value, &used) * scale;
        if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
        throw m2c::ParseError("tau override value '" + text + "' is not a number");
    }
    if (meters < 0.0)
        throw m2c::ParseError("tau override '" + text + "' is negative");
    return {*cls, meters};
}

std::string format_extent(const m2c::Aabb& box) {
    if (box.empty()) return "(empty)";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "(%.3f, %.3f, %.3f) .. (%.3f, %.3f, %.3f)",
                  box.min.x, box.min.y, box.min.z, box.max.x, box.max.y, box.max.z);
    return buf;
}

void print_histogram(const m2c::Taxonomy& tax, const m2c::ClassHistogram& hist) {
    for (std::size_t c = 0; c < tax.size(); ++c)
        std::printf("  %-14s %12llu\n", tax.names[c].c_str(),
                    static_cast<unsigned long long>(hist.counts[c]));
    if (hist.unlabeled > 0)
        std::printf("  %-14s %12llu\n", "(unlabeled)",
                    static_cast<unsigned long long>(hist.unlabeled));
}

json histogram_json(const m2c::Taxonomy& tax, const m2c::ClassHistogram& hist) {
    json out = json::object();
    for (std::size_t c = 0; c < tax.size(); ++c) out[tax.names[c]] = hist.counts[c];
    out["(unlabeled)"] = hist.unlabeled;
    return out;
}

struct EvalInput {
    std::vector<std::uint8_t> reference;
    std::vector<std::uint8_t> predicted;
    m2c::TaxonomyId taxonomy = m2c::TaxonomyId::Gold;
};

int run_eval(const EvalInput& input, bool as_json) {
    const m2c::Taxonomy& tax = m2c::taxonomy_for(input.taxonomy);
    m2c::ConfusionMatrix matrix =
        m2c::confusion(input.reference, input.predicted, tax.size());
    m2c::MetricReport rep = m2c::report(matrix);
    auto rows = m2c::row_normalize(matrix);

    if (as_json) {
        json out;
        out["taxonomy"] = taxonomy_name(input.taxonomy);
        out["points"] = matrix.total;
        out["skipped_unlabeled"] = matrix.unlabeled_skipped;
        out["oa"] = rep.oa;
        out["aa"] = rep.aa;
        out["miou"] = rep.miou;
        json iou = json::object();
        for (std::size_t c = 0; c < tax.size(); ++c)
            if (!std::isnan(rep.iou[c])) iou[tax.names[c]] = rep.iou[c];
        out["iou"] = iou;
        out["confusion_rows_pct"] = rows;
        std::cout << out.dump(2) << '\n';
        return kExitOk;
    }

    std::printf("points evaluated: %llu (skipped unlabeled: %llu)\n",
                static_cast<unsigned long long>(matrix.total),
                static_cast<unsigned long long>(matrix.unlabeled_skipped));
    std::printf("%-14s %8s %8s\n", "class", "IoU", "recall");
    for (std::size_t c = 0; c < tax.size(); ++c) {
        if (std::isnan(rep.iou[c])) continue;
        if (std::isnan(rep.recall[c]))
            std::printf("%-14s %8.4f %8s\n", tax.names[c].c_str(), rep.iou[c], "-");
        else
            std::printf("%-14s %8.4f %8.4f\n", tax.names[c].c_str(), rep.iou[c],
                        rep.recall[c]);
    }
    std::printf("OA %.4f  AA %.4f  mIoU %.4f\n", rep.oa, rep.aa, rep.miou);

    std::printf("row-normalized confusion (%%, rows = reference):\n");
    std::printf("%-14s", "");
    for (std::size_t c = 0; c < tax.size(); ++c) std::printf(" %6.6s", tax.names[c].c_str());
    std::printf("\n");
    for (std::size_t r = 0; r < tax.size(); ++r) {
        std::printf("%-14s", tax.names[r].c_str());
        for (std::size_t c = 0; c < tax.size(); ++c) std::printf(" %6.1f", rows[r][c]);
        std::printf("\n");
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"model-to-cloud pseudo-labeling pipeline"};
    app.require_subcommand(1);

    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    auto* gen = app.add_subcommand("gen", "generate a synthetic scene and cloud");
    std::string gen_spec, gen_out;
    gen->add_option("--spec", gen_spec, "room spec file")->required();
    gen->add_option("--out", gen_out, "output directory")->required();

    auto* label = app.add_subcommand("label", "pseudo-label a cloud against a scene");
    std::string label_cloud, label_scene, label_manifest, label_out;
    std::vector<std::string> label_tau;
    unsigned label_threads = 0;
    label->add_option("--cloud", label_cloud, "input cloud file")->required();
    label->add_option("--scene", label_scene, "scene mesh directory")->required();
    label->add_option("--manifest", label_manifest,
                      "class manifest (default: <scene>/manifest.txt)");
    label->add_option("--out", label_out, "output cloud file")->required();
    label->add_option("--tau", label_tau,
                      "per-class threshold override, Class=value (cm suffix ok)");
    label->add_option("--threads", label_threads, "worker threads (0 = all cores)");

    auto* simplify = app.add_subcommand("simplify", "rewrite Gold labels as Silver");
    std::string simplify_cloud, simplify_out;
    simplify->add_option("--cloud", simplify_cloud, "input Gold cloud")->required();
    simplify->add_option("--out", simplify_out, "output Silver cloud")->required();

    auto* eval = app.add_subcommand("eval", "segmentation metrics");
    std::string eval_cloud, eval_ref, eval_pred;
    eval->add_option("--cloud", eval_cloud, "cloud with real and pseudo labels");
    eval->add_option("--ref", eval_ref, "reference cloud (real labels)");
    eval->add_option("--pred", eval_pred, "predicted cloud (pseudo labels)");

    auto* stats = app.add_subcommand("stats", "label histograms and extent");
    std::string stats_cloud;
    stats->add_option("--cloud", stats_cloud, "cloud file")->required();

    auto* subsample = app.add_subcommand("subsample", "voxel-subsample a cloud");
    std::string subsample_cloud, subsample_out;
    double subsample_cell = 0.01;
    subsample->add_option("--cloud", subsample_cloud, "input cloud")->required();
    subsample->add_option("--out", subsample_out, "output cloud")->required();
    subsample->add_option("--cell", subsample_cell, "voxel size in meters (default 0.01)");

    auto* convert = app.add_subcommand("convert", "binary <-> ascii interchange");
    std::string convert_in, convert_out, convert_tax = "gold";
    convert->add_option("--in", convert_in, "input file")->required();
    convert->add_option("--out", convert_out, "output file")->required();
    convert->add_option("--taxonomy", convert_tax,
                        "taxonomy for ascii input (gold|silver)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (gen->parsed()) {
            m2c::RoomSpec spec = m2c::RoomSpec::parse_file(gen_spec);
            m2c::SceneModel scene = m2c::build_scene(spec);
            m2c::LabeledCloud cloud = m2c::sample_cloud(scene, spec);

            fs::create_directories(gen_out);
            std::string mesh_dir = (fs::path(gen_out) / "meshes").string();
            m2c::save_scene(scene, mesh_dir);
            std::string cloud_path = (fs::path(gen_out) / "cloud.pcl").string();
            m2c::write_cloud_file(cloud, cloud_path);

            if (as_json) {
                json out;
                out["objects"] = scene.objects.size();
                out["points"] = cloud.size();
                out["meshes"] = mesh_dir;
                out["manifest"] = (fs::path(mesh_dir) / "manifest.txt").string();
                out["cloud"] = cloud_path;
                std::cout << out.dump(2) << '\n';
            } else {
                std::printf("scene: %zu objects -> %s\n", scene.objects.size(),
                            mesh_dir.c_str());
                std::printf("cloud: %zu points -> %s\n", cloud.size(), cloud_path.c_str());
            }
        } else if (label->parsed()) {
            m2c::LabeledCloud cloud = m2c::read_cloud_file(label_cloud);
            std::string manifest_path = label_manifest.empty()
                ? (fs::path(label_scene) / "manifest.txt").string()
                : label_manifest;
            m2c::ClassManifest manifest = m2c::ClassManifest::parse_file(manifest_path);
            m2c::SceneModel scene =
                m2c::load_scene(label_scene, manifest, cloud.taxonomy_id);

            const m2c::Taxonomy& tax = m2c::taxonomy_for(cloud.taxonomy_id);
            m2c::ThresholdPolicy policy = m2c::policy_for(cloud.taxonomy_id);
            for (const std::string& text : label_tau) {
                auto [cls, meters] = parse_tau_override(text, tax);
                policy.set(cls, meters);
            }

            m2c::LabelReport report;
            m2c::LabeledCloud out =
                m2c::pseudo_label(cloud, scene, policy, &report, label_threads);
            m2c::write_cloud_file(out, label_out);

            std::vector<double> class_seconds = report.class_seconds(tax.size());
            if (as_json) {
                json objects = json::array();
                for (const auto& o : report.objects)
                    objects.push_back({{"object_id", o.object_id},
                                       {"name", scene.objects[o.object_id].name},
                                       {"class", tax.names[o.class_id]},
                                       {"seconds", o.elapsed_seconds},
                                       {"points_claimed", o.points_claimed}});
                json doc;
                doc["objects"] = objects;
                doc["class_counts"] = histogram_json(
                    tax, m2c::class_histogram(out, m2c::LabelColumn::Pseudo));
                json seconds = json::object();
                for (std::size_t c = 0; c < tax.size(); ++c)
                    seconds[tax.names[c]] = class_seconds[c];
                doc["class_seconds"] = seconds;
                doc["clutter_fallback"] = report.clutter_fallback;
                doc["non_finite"] = report.non_finite;
                doc["out"] = label_out;
                std::cout << doc.dump(2) << '\n';
            } else {
                std::printf("%-6s %-14s %-14s %10s %12s\n", "id", "object", "class",
                            "seconds", "points");
                for (const auto& o : report.objects)
                    std::printf("%-6u %-14s %-14s %10.3f %12llu\n", o.object_id,
                                scene.objects[o.object_id].name.c_str(),
                                tax.names[o.class_id].c_str(), o.elapsed_seconds,
                                static_cast<unsigned long long>(o.points_claimed));
                std::printf("seconds by class:\n");
                for (std::size_t c = 0; c < tax.size(); ++c)
                    if (class_seconds[c] > 0.0)
                        std::printf("  %-14s %10.3f\n", tax.names[c].c_str(),
                                    class_seconds[c]);
                std::printf("clutter fallback: %llu points, non-finite: %llu\n",
                            static_cast<unsigned long long>(report.clutter_fallback),
                            static_cast<unsigned long long>(report.non_finite));
                std::printf("labeled %zu points -> %s\n", out.size(), label_out.c_str());
            }
        } else if (simplify->parsed()) {
            m2c::LabeledCloud cloud = m2c::read_cloud_file(simplify_cloud);

            // Simplify whichever label columns are fully populated; a
            // partially labeled column is an input error surfaced by
            // simplify_column itself.
            auto fully_labeled = [&](m2c::LabelColumn which) {
                const auto& col = m2c::label_column(cloud, which);
                return !col.empty() &&
                       std::none_of(col.begin(), col.end(),
                                    [](std::uint8_t v) { return v == m2c::UNLABELED; });
            };
            bool do_real = fully_labeled(m2c::LabelColumn::Real);
            bool do_pseudo = fully_labeled(m2c::LabelColumn::Pseudo);
            if (!do_real && !do_pseudo)
                throw m2c::UnlabeledPoint("no fully labeled column to simplify");

            m2c::LabeledCloud out = cloud;
            out.taxonomy_id = m2c::TaxonomyId::Silver;
            out.real_label.assign(cloud.size(), m2c::UNLABELED);
            out.pseudo_label.assign(cloud.size(), m2c::UNLABELED);
            if (do_real)
                out.real_label = m2c::simplify_column(cloud, m2c::LabelColumn::Real);
            if (do_pseudo)
                out.pseudo_label = m2c::simplify_column(cloud, m2c::LabelColumn::Pseudo);
            m2c::write_cloud_file(out, simplify_out);

            if (as_json) {
                json doc;
                doc["points"] = out.size();
                doc["real_simplified"] = do_real;
                doc["pseudo_simplified"] = do_pseudo;
                doc["out"] = simplify_out;
                std::cout << doc.dump(2) << '\n';
            } else {
                std::printf("simplified %zu points (real: %s, pseudo: %s) -> %s\n",
                            out.size(), do_real ? "yes" : "no", do_pseudo ? "yes" : "no",
                            simplify_out.c_str());
            }
        } else if (eval->parsed()) {
            EvalInput input;
            if (!eval_cloud.empty()) {
                m2c::LabeledCloud cloud = m2c::read_cloud_file(eval_cloud);
                input.reference = cloud.real_label;
                input.predicted = cloud.pseudo_label;
                input.taxonomy = cloud.taxonomy_id;
            } else if (!eval_ref.empty() && !eval_pred.empty()) {
                m2c::LabeledCloud ref = m2c::read_cloud_file(eval_ref);
                m2c::LabeledCloud pred = m2c::read_cloud_file(eval_pred);
                if (ref.taxonomy_id != pred.taxonomy_id)
                    throw m2c::TaxonomyMismatch("reference and prediction taxonomies differ");
                input.reference = ref.real_label;
                input.predicted = pred.pseudo_label;
                input.taxonomy = ref.taxonomy_id;
            } else {
                throw m2c::ParseError("eval needs --cloud or both --ref and --pred");
            }
            return run_eval(input, as_json);
        } else if (stats->parsed()) {
            m2c::LabeledCloud cloud = m2c::read_cloud_file(stats_cloud);
            const m2c::Taxonomy& tax = m2c::taxonomy_for(cloud.taxonomy_id);
            auto real = m2c::class_histogram(cloud, m2c::LabelColumn::Real);
            auto pseudo = m2c::class_histogram(cloud, m2c::LabelColumn::Pseudo);

            if (as_json) {
                json doc;
                doc["points"] = cloud.size();
                doc["taxonomy"] = taxonomy_name(cloud.taxonomy_id);
                doc["scan_id"] = cloud.scan_id;
                m2c::Aabb box = cloud.bounds();
                if (!box.empty())
                    doc["extent"] = {{"min", {box.min.x, box.min.y, box.min.z}},
                                     {"max", {box.max.x, box.max.y, box.max.z}}};
                doc["real"] = histogram_json(tax, real);
                doc["pseudo"] = histogram_json(tax, pseudo);
                std::cout << doc.dump(2) << '\n';
            } else {
                std::printf("points:   %zu\n", cloud.size());
                std::printf("taxonomy: %s\n", taxonomy_name(cloud.taxonomy_id));
                std::printf("extent:   %s\n", format_extent(cloud.bounds()).c_str());
                std::printf("real labels:\n");
                print_histogram(tax, real);
                std::printf("pseudo labels:\n");
                print_histogram(tax, pseudo);
            }
        } else if (subsample->parsed()) {
            if (!(subsample_cell > 0.0))
                throw m2c::ParseError("--cell must be positive");
            m2c::LabeledCloud cloud = m2c::read_cloud_file(subsample_cloud);
            m2c::LabeledCloud out = m2c::voxel_subsample(cloud, subsample_cell);
            m2c::write_cloud_file(out, subsample_out);
            if (as_json) {
                json doc;
                doc["in_points"] = cloud.size();
                doc["out_points"] = out.size();
                doc["cell"] = subsample_cell;
                doc["out"] = subsample_out;
                std::cout << doc.dump(2) << '\n';
            } else {
                std::printf("subsampled %zu -> %zu points at %.4f m -> %s\n",
                            cloud.size(), out.size(), subsample_cell,
                            subsample_out.c_str());
            }
        } else if (convert->parsed()) {
            // Binary input is detected by magic; anything else parses as
            // ascii and writes binary.
            std::ifstream probe(convert_in, std::ios::binary);
            if (!probe) throw m2c::IoError("cannot open '" + convert_in + "'");
            char magic[8] = {};
            probe.read(magic, sizeof(magic));
            bool is_binary = probe.gcount() == 8 &&
                             std::memcmp(magic, m2c::kCloudMagic, 8) == 0;
            probe.close();

            if (is_binary) {
                m2c::LabeledCloud cloud = m2c::read_cloud_file(convert_in);
                std::ofstream out(convert_out);
                if (!out) throw m2c::IoError("cannot open '" + convert_out + "' for writing");
                m2c::write_cloud_ascii(cloud, out);
                std::printf("binary -> ascii: %zu points -> %s\n", cloud.size(),
                            convert_out.c_str());
            } else {
                std::ifstream in(convert_in);
                if (!in) throw m2c::IoError("cannot open '" + convert_in + "'");
                m2c::LabeledCloud cloud =
                    m2c::read_cloud_ascii(in, parse_taxonomy(convert_tax));
                m2c::write_cloud_file(cloud, convert_out);
                std::printf("ascii -> binary: %zu points -> %s\n", cloud.size(),
                            convert_out.c_str());
            }
        }
    } catch (const m2c::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.error_class()) {
        case m2c::ErrorClass::Io: return kExitIo;
        case m2c::ErrorClass::Validation: return kExitValidation;
        case m2c::ErrorClass::Internal: return kExitInternal;
        }
        return kExitInternal;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: Internal: %s\n", e.what());
        return kExitInternal;
    }
    return kExitOk;
}
