import json

import pytest

from premsel_neural.encoder import EncoderNotCachedError, load_classifier
from premsel_neural.score import score_pairs
from premsel_neural.train import CONFIG_FILE, FineTuneConfig, fine_tune

from conftest import make_labeled_pairs


def _config(encoder, **overrides):
    defaults = dict(encoder=str(encoder), epochs=2, batch_size=8,
                    learning_rate=5e-4, max_length=64, seed=0)
    defaults.update(overrides)
    return FineTuneConfig(**defaults)


class TestFineTune:
    def test_train_loss_decreases(self, tiny_encoder, tmp_path):
        pairs = make_labeled_pairs(seed=1)
        result = fine_tune(pairs, [], tmp_path / "ckpt", _config(tiny_encoder, epochs=3))
        assert len(result.train_losses) == 3
        assert result.train_losses[-1] < result.train_losses[0]

    def test_dev_loss_logged_per_epoch(self, tiny_encoder, tmp_path):
        pairs = make_labeled_pairs(seed=2)
        dev = pairs[: len(pairs) // 4]
        train = pairs[len(pairs) // 4:]
        result = fine_tune(train, dev, tmp_path / "ckpt", _config(tiny_encoder))
        assert len(result.dev_losses) == 2

    def test_checkpoint_reloadable_with_config_record(self, tiny_encoder, tmp_path):
        out = tmp_path / "ckpt"
        fine_tune(make_labeled_pairs(), [], out, _config(tiny_encoder))
        record = json.loads((out / CONFIG_FILE).read_text(encoding="utf-8"))
        assert record["format_version"] == 1
        assert record["config"]["epochs"] == 2
        tokenizer, model = load_classifier(out)
        assert model.num_labels == 2

    def test_frozen_encoder_head_only_training(self, tiny_encoder, tmp_path):
        out = tmp_path / "frozen"
        result = fine_tune(
            make_labeled_pairs(), [], out, _config(tiny_encoder, freeze_encoder=True)
        )
        assert result.train_losses
        pairs = make_labeled_pairs()[:4]
        records = score_pairs(out, pairs, max_length=64)
        assert len(records) == 4
        assert all(0.0 <= s <= 1.0 for _, _, s in records)

    def test_empty_training_set_rejected(self, tiny_encoder, tmp_path):
        with pytest.raises(ValueError):
            fine_tune([], [], tmp_path / "x", _config(tiny_encoder))


class TestEncoderPolicy:
    def test_missing_encoder_gives_download_instruction(self, tmp_path):
        with pytest.raises(EncoderNotCachedError, match="Download it once with"):
            load_classifier(tmp_path / "not-a-model")
