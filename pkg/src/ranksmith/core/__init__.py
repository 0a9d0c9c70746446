"""Vector math and ranking functions shared by metrics and losses."""
